#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posrep/group_model.hpp"
#include "posrep/random.hpp"

namespace posrep {

// A point of G/P+, stored through any representative.
template <class S>
struct Flag {
  Mat<S> rep;
};

template <class S>
Flag<S> standard_flag(const GroupModel<S>& m) {
  return {m.identity()};
}

template <class S>
Flag<S> opposite_flag(const GroupModel<S>& m) {
  return {m.omega()};
}

template <class S>
Flag<S> act(const Mat<S>& g, const Flag<S>& f) {
  return {g * f.rep};
}

template <class S>
bool same_flag(const GroupModel<S>& m, const Flag<S>& a, const Flag<S>& b) {
  return m.block_upper(inverse(a.rep) * b.rep);
}

// Reduced column echelon form per parabolic block, pivots chosen from the bottom.
// Equal flags give equal matrices.
template <class S>
Mat<S> canonical_form(const GroupModel<S>& m, const Flag<S>& f) {
  int N = m.dim();
  Mat<S> a = f.rep;
  std::vector<std::pair<int, int>> pivots;  // (row, column)
  int c0 = 0;
  for (int b : m.blocks()) {
    int c1 = c0 + b;
    for (auto [r, pc] : pivots)
      for (int c = c0; c < c1; ++c) {
        S f0 = a(r, c);
        if (Sc<S>::is_zero(f0)) continue;
        for (int i = 0; i < N; ++i) a(i, c) -= f0 * a(i, pc);
      }
    int next = c0;
    for (int r = N - 1; r >= 0 && next < c1; --r) {
      int found = -1;
      for (int c = next; c < c1; ++c) {
        bool nz;
        if constexpr (Sc<S>::exact) {
          nz = !Sc<S>::is_zero(a(r, c));
        } else {
          nz = std::fabs(a(r, c)) > tolerance();
        }
        if (nz) {
          found = c;
          break;
        }
      }
      if (found < 0) continue;
      if (found != next)
        for (int i = 0; i < N; ++i) std::swap(a(i, found), a(i, next));
      S inv = S(1) / a(r, next);
      for (int i = 0; i < N; ++i) a(i, next) *= inv;
      for (int c = c0; c < c1; ++c) {
        if (c == next) continue;
        S f0 = a(r, c);
        if (Sc<S>::is_zero(f0)) continue;
        for (int i = 0; i < N; ++i) a(i, c) -= f0 * a(i, next);
      }
      pivots.push_back({r, next});
      ++next;
    }
    if (next != c1) throw Error(Err::SingularCell, "flag representative is singular");
    c0 = c1;
  }
  if constexpr (!Sc<S>::exact) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (Sc<S>::is_zero(a(i, j))) a(i, j) = 0;
  }
  return a;
}

// Same flag, represented by an element of G. Canonical forms (and matrices read
// from files) need not lie in G, and positivity tests are only meaningful on
// group representatives: move the flag into the big cell by some h, write it
// as u w P+ there, and pull back.
template <class S>
Flag<S> group_representative(const GroupModel<S>& m, const Flag<S>& f) {
  if (m.in_group(f.rep)) return f;
  Rng rng(0x5eed);
  Mat<S> h = m.identity();
  for (int i = 0; i < 64; ++i) {
    if (auto bc = m.try_big_cell(h * f.rep)) {
      Flag<S> g{inverse(h) * bc->u * m.omega()};
      if (m.in_group(g.rep) && same_flag(m, g, f)) return g;
    }
    h = random_unipotent(m, rng, true) * m.omega() * random_unipotent(m, rng, true);
  }
  throw Error(Err::NotInGroup, "flag has no representative in the group");
}

template <class S>
bool transverse(const GroupModel<S>& m, const Flag<S>& a, const Flag<S>& b) {
  return m.try_big_cell(inverse(a.rep) * b.rep).has_value();
}

// The unique u in U+ with F = u w P+.
template <class S>
Mat<S> unipotent_coordinate(const GroupModel<S>& m, const Flag<S>& f, const std::string& witness = "") {
  auto bc = m.try_big_cell(f.rep);
  if (!bc) throw Error(Err::NotTransverse, witness, "flag is not transverse to the standard flag");
  return bc->u;
}

// g with g(F1, F2) = (P+, w P+).
template <class S>
Mat<S> normalize_pair(const GroupModel<S>& m, const Flag<S>& f1, const Flag<S>& f2, const std::string& witness = "") {
  Mat<S> r1i = inverse(f1.rep);
  auto bc = m.try_big_cell(r1i * f2.rep);
  if (!bc) throw Error(Err::NotTransverse, witness, "flags " + witness + " are not transverse");
  return inverse(bc->u) * r1i;
}

template <class S>
struct TripleNormal {
  Mat<S> g, u;
};

template <class S>
TripleNormal<S> normalize_triple(const GroupModel<S>& m, const Flag<S>& f1, const Flag<S>& f2, const Flag<S>& f3) {
  if (!transverse(m, f2, f3)) throw Error(Err::NotTransverse, "F2,F3", "flags F2,F3 are not transverse");
  Mat<S> g = normalize_pair(m, f1, f2, "F1,F2");
  Mat<S> u = unipotent_coordinate(m, act(g, f3), "F1,F3");
  return {g, u};
}

template <class S>
struct QuadNormal {
  Mat<S> g, u, u1, u2;  // u1 = u', u2 = u''
};

// g(F1,F2,F3,F4) = (P+, w u' w P+, w P+, u w P+) and w u' w P+ = (u'')^{-1} w P+.
template <class S>
QuadNormal<S> normalize_quadruple(const GroupModel<S>& m, const Flag<S>& f1, const Flag<S>& f2, const Flag<S>& f3,
                                  const Flag<S>& f4) {
  Mat<S> g = normalize_pair(m, f1, f3, "F1,F3");
  if (!transverse(m, f3, f4)) throw Error(Err::NotTransverse, "F3,F4", "flags F3,F4 are not transverse");
  if (!transverse(m, f2, f3)) throw Error(Err::NotTransverse, "F2,F3", "flags F2,F3 are not transverse");
  Mat<S> u = unipotent_coordinate(m, act(g, f4), "F1,F4");
  Flag<S> g2 = act(g, f2);
  Mat<S> u1 = unipotent_coordinate(m, act(m.omega_inv(), g2), "F2,F3");
  Mat<S> u2 = inverse(unipotent_coordinate(m, g2, "F1,F2"));
  return {g, u, u1, u2};
}

// Positive after some sign gauge l in L: l u l^{-1} in U+_{>0}.
template <class S>
std::optional<Mat<S>> positivity_gauge(const GroupModel<S>& m, const Mat<S>& u) {
  for (auto& l : m.sign_gauges()) {
    Mat<S> c = l * u * inverse(l);
    if (m.is_positive_unipotent(c)) return l;
  }
  return std::nullopt;
}

template <class S>
bool is_positive_tuple(const GroupModel<S>& m, const std::vector<Flag<S>>& flags) {
  if (flags.size() < 3) throw Error(Err::ModelMismatch, "positive tuples need at least three flags");
  Mat<S> g = normalize_pair(m, flags[0], flags[1], "F1,F2");
  std::vector<Mat<S>> inc;
  Mat<S> prev = m.identity();
  for (size_t i = 2; i < flags.size(); ++i) {
    std::string w = "F" + std::to_string(i) + ",F" + std::to_string(i + 1);
    if (!transverse(m, flags[i - 1], flags[i])) throw Error(Err::NotTransverse, w, "flags " + w + " are not transverse");
    Mat<S> c = unipotent_coordinate(m, act(g, flags[i]), "F1,F" + std::to_string(i + 1));
    inc.push_back(inverse(prev) * c);
    prev = c;
  }
  auto l = positivity_gauge(m, inc[0]);
  if (!l) return false;
  Mat<S> li = inverse(*l);
  for (size_t i = 1; i < inc.size(); ++i)
    if (!m.is_positive_unipotent(*l * inc[i] * li)) return false;
  return true;
}

template <class S>
struct TurnResult {
  Mat<S> transport, new_u;
};

template <class S>
TurnResult<S> turn_left(const GroupModel<S>& m, const Mat<S>& u) {
  return {m.omega() * inverse(u), m.left_map(u)};
}

template <class S>
TurnResult<S> turn_right(const GroupModel<S>& m, const Mat<S>& u) {
  Mat<S> r = m.right_map(u);
  return {r * m.omega(), r};
}

template <class S>
Mat<S> cross_edge(const GroupModel<S>& m) {
  return m.omega();
}

template <class S>
bool in_diamond(const GroupModel<S>& m, const Flag<S>& f, int sign) {
  auto bc = m.try_big_cell(f.rep);
  if (!bc) return false;
  return m.is_positive_unipotent(sign > 0 ? bc->u : inverse(bc->u));
}

template <class S>
struct PowerVerdict {
  bool in_parabolic = false;
  bool commutes = false;  // (u w)^k = (w u)^k
  bool in_levi = false;
  bool normalizes = false;
  Mat<S> power;
};

template <class S>
PowerVerdict<S> check_power_in_levi(const GroupModel<S>& m, const Mat<S>& u, int k) {
  PowerVerdict<S> v;
  v.power = power(u * m.omega(), k);
  v.in_parabolic = m.block_upper(v.power);
  if (v.in_parabolic) {
    v.commutes = v.power == power(m.omega() * u, k);
    v.in_levi = m.block_lower(v.power);
    v.normalizes = v.power * u * inverse(v.power) == u;
  }
  return v;
}

template <class S>
std::optional<int> absorption_exponent(const GroupModel<S>& m, const Mat<S>& u, int cap) {
  Mat<S> t = m.identity();
  for (int n = 1; n <= cap; ++n) {
    t = t * m.u_theta();
    if (m.is_positive_unipotent(t * u) && m.is_positive_unipotent(u * t)) return n;
  }
  return std::nullopt;
}

// Challenge flags x P+ with x a product of sparse unipotents and omegas; these
// land in many Bruhat cells, including the small ones near P+.
template <class S>
Flag<S> random_challenge_flag(const GroupModel<S>& m, Rng& rng) {
  Mat<S> x = random_unipotent(m, rng, true);
  int k = static_cast<int>(rand_int(rng, 1, 3));
  for (int i = 0; i < k; ++i) x = x * m.omega() * random_unipotent(m, rng, true);
  if (rand_int(rng, 0, 1)) x = x * m.omega();
  return {x};
}

// g fixes P+, and no sampled flag other than P+ is fixed by g.
template <class S>
bool fixes_only_standard_flag(const GroupModel<S>& m, const Mat<S>& g, int trials, Rng& rng) {
  if (!m.block_upper(g)) return false;
  Flag<S> st = standard_flag(m);
  for (int i = 0; i < trials; ++i) {
    Flag<S> f = random_challenge_flag(m, rng);
    if (same_flag(m, f, st)) continue;
    if (same_flag(m, act(g, f), f)) return false;
  }
  return true;
}

template <class S>
bool fixes_unique_standard_flag(const GroupModel<S>& m, const Mat<S>& k, int s, int trials, Rng& rng) {
  if (!(k * m.u_theta() * inverse(k) == m.u_theta()))
    throw Error(Err::NotNormalizer, "k does not normalize u_theta");
  Mat<S> ut = s > 0 ? m.u_theta() : inverse(m.u_theta());
  Mat<S> g = k * power(ut, s > 0 ? s : -s);
  return fixes_only_standard_flag(m, g, trials, rng);
}

}  // namespace posrep
