#pragma once

#include <cstdint>
#include <random>

#include "posrep/group_model.hpp"

namespace posrep {

using Rng = std::mt19937_64;

// SplitMix64 step; gives independent per-sample seeds from one master seed.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline long rand_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

template <class S>
S rand_scalar(Rng& rng, long lo = -9, long hi = 9, long maxden = 4) {
  return Sc<S>::from_ratio(rand_int(rng, lo, hi), rand_int(rng, 1, maxden));
}

template <class S>
S rand_positive(Rng& rng) {
  return Sc<S>::from_ratio(rand_int(rng, 1, 9), rand_int(rng, 1, 4));
}

template <class S>
S rand_nonzero(Rng& rng) {
  S x = rand_positive<S>(rng);
  return rand_int(rng, 0, 1) ? x : S(-x);
}

template <class S>
std::vector<S> rand_cone_vector(const GroupModel<S>& m, Rng& rng) {
  int n = m.n();
  std::vector<S> v(n + 1);
  S mid(0);
  for (int k = 1; k < n; ++k) {
    v[k] = rand_scalar<S>(rng, -4, 4, 3);
    mid += v[k] * v[k];
  }
  v[0] = rand_positive<S>(rng);
  v[n] = (mid / S(2) + rand_positive<S>(rng)) / v[0];
  return v;
}

// Any element of U+; with sparse set, entries vanish with probability 1/2.
template <class S>
Mat<S> random_unipotent(const GroupModel<S>& m, Rng& rng, bool sparse = false) {
  auto entry = [&]() { return sparse && rand_int(rng, 0, 1) ? S(0) : rand_scalar<S>(rng); };
  if (m.family() == Family::SO) {
    SOChart<S> ch;
    ch.C.assign(m.p(), std::vector<S>(m.p() - 1));
    for (auto& row : ch.C)
      for (auto& x : row) x = entry();
    for (int i = 0; i < m.p(); ++i) {
      std::vector<S> v(m.n() + 1);
      for (auto& x : v) x = entry();
      ch.V.push_back(v);
    }
    return m.so_from_chart(ch);
  }
  std::vector<S> c(m.coord_count());
  for (auto& x : c) x = entry();
  return m.from_coords(c);
}

template <class S>
Mat<S> random_positive_unipotent(const GroupModel<S>& m, Rng& rng) {
  switch (m.family()) {
    case Family::SL: {
      std::vector<S> t(m.n() * (m.n() - 1) / 2);
      for (auto& x : t) x = rand_positive<S>(rng);
      return m.sl_from_word(t);
    }
    case Family::SP: {
      int n = m.n();
      Mat<S> a(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rand_scalar<S>(rng, -3, 3, 2);
      Mat<S> b = a.transpose() * a;
      for (int i = 0; i < n; ++i) b(i, i) += rand_positive<S>(rng);
      std::vector<S> c;
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) c.push_back(b(i, j));
      return m.from_coords(c);
    }
    case Family::SO: {
      SOChart<S> ch;
      ch.C.assign(m.p(), std::vector<S>(m.p() - 1));
      for (auto& row : ch.C)
        for (auto& x : row) x = rand_positive<S>(rng);
      for (int i = 0; i < m.p(); ++i) ch.V.push_back(rand_cone_vector(m, rng));
      return m.so_from_chart(ch);
    }
  }
  return m.identity();
}

// Rejection sampling into U+_*.
template <class S>
Mat<S> random_ustar(const GroupModel<S>& m, Rng& rng) {
  for (;;) {
    Mat<S> u = random_unipotent(m, rng);
    if (m.is_ustar(u)) return u;
  }
}

template <class S>
Mat<S> random_levi(const GroupModel<S>& m, Rng& rng, bool in_l0) {
  switch (m.family()) {
    case Family::SL: {
      int n = m.n();
      std::vector<S> d(n);
      S prod(1);
      S sign(1);
      if (in_l0 && n % 2 == 0 && rand_int(rng, 0, 1)) sign = -1;
      for (int i = 0; i + 1 < n; ++i) {
        d[i] = rand_positive<S>(rng);
        if (in_l0)
          d[i] *= sign;
        else if (rand_int(rng, 0, 1))
          d[i] = -d[i];
        prod *= d[i];
      }
      d[n - 1] = S(1) / prod;
      return Mat<S>::diag(d);
    }
    case Family::SP: {
      int n = m.n();
      for (;;) {
        std::vector<S> c(n * n);
        for (auto& x : c) x = rand_scalar<S>(rng, -4, 4, 3);
        Mat<S> a = Mat<S>::from_flat(n, c);
        if (!Sc<S>::is_zero(det(a))) return m.levi_from_coords(c);
      }
    }
    case Family::SO: {
      // y = (cone flip)^e * boost(w0 -> a) * (optional rotation of two middle axes)
      int p = m.p(), n = m.n();
      std::vector<S> a(n + 1);
      S mid(0);
      for (int k = 1; k < n; ++k) {
        a[k] = rand_scalar<S>(rng, -3, 3, 2);
        mid += a[k] * a[k];
      }
      a[0] = rand_positive<S>(rng);
      a[n] = (S(1) + mid / S(2)) / a[0];
      Mat<S> yy = m.so_boost(a);
      if (n >= 3 && rand_int(rng, 0, 1)) {
        Mat<S> r = Mat<S>::identity(n + 1);
        r(1, 1) = 0;
        r(2, 2) = 0;
        r(1, 2) = -1;
        r(2, 1) = 1;
        yy = yy * r;
      }
      int eps = 1;
      if (!in_l0 || p % 2 == 1) eps = rand_int(rng, 0, 1) ? -1 : 1;
      if (eps < 0) yy = m.cone_flip() * yy;
      std::vector<S> c;
      for (int i = 0; i < p; ++i) {
        S x = rand_positive<S>(rng);
        c.push_back(in_l0 ? (eps > 0 ? x : S(-x)) : x);
      }
      if (!in_l0) {
        // random signs with total signature 1
        int neg = eps < 0 ? 1 : 0;
        for (int i = 0; i + 1 < p; ++i)
          if (rand_int(rng, 0, 1)) {
            c[i] = -c[i];
            ++neg;
          }
        if (neg % 2) c[p - 1] = -c[p - 1];
      }
      for (auto& x : yy.flat()) c.push_back(x);
      return m.levi_from_coords(c);
    }
  }
  return m.identity();
}

}  // namespace posrep
