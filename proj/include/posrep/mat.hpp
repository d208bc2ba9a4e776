#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "posrep/scalar.hpp"

namespace posrep {

template <class S>
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n) : n_(n), a_(static_cast<size_t>(n) * n, S(0)) {}
  Mat(std::initializer_list<std::initializer_list<S>> rows) : n_(static_cast<int>(rows.size())) {
    a_.reserve(static_cast<size_t>(n_) * n_);
    for (auto& r : rows) {
      if (static_cast<int>(r.size()) != n_) throw Error(Err::ModelMismatch, "matrix is not square");
      for (auto& x : r) a_.push_back(x);
    }
  }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  static Mat diag(const std::vector<S>& d) {
    Mat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[i];
    return m;
  }
  static Mat from_flat(int n, std::vector<S> v) {
    if (v.size() != static_cast<size_t>(n) * n) throw Error(Err::ModelMismatch, "wrong entry count");
    Mat m;
    m.n_ = n;
    m.a_ = std::move(v);
    return m;
  }

  int n() const { return n_; }
  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<S>& flat() const { return a_; }

  Mat transpose() const {
    Mat t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat r(x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        const S& xik = x(i, k);
        if (Sc<S>::exact && Sc<S>::is_zero(xik)) continue;
        for (int j = 0; j < x.n_; ++j) r(i, j) += xik * y(k, j);
      }
    return r;
  }
  friend Mat operator+(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat r(x);
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
    return r;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    check_same(x, y);
    Mat r(x);
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
  }
  friend Mat operator*(const S& c, const Mat& x) {
    Mat r(x);
    for (auto& v : r.a_) v *= c;
    return r;
  }
  // Exact equality on the rational backend, entrywise tolerance on floats.
  friend bool operator==(const Mat& x, const Mat& y) {
    if (x.n_ != y.n_) return false;
    for (size_t i = 0; i < x.a_.size(); ++i)
      if (!Sc<S>::eq(x.a_[i], y.a_[i])) return false;
    return true;
  }

  bool is_identity() const { return *this == identity(n_); }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < n_; ++j) s += (j ? "," : "") + Sc<S>::str((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  static void check_same(const Mat& x, const Mat& y) {
    if (x.n_ != y.n_)
      throw Error(Err::ModelMismatch, "dimension " + std::to_string(x.n_) + " vs " + std::to_string(y.n_));
  }

  int n_ = 0;
  std::vector<S> a_;
};

template <class S>
Mat<S> power(const Mat<S>& m, int k) {
  Mat<S> r = Mat<S>::identity(m.n());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

// Bareiss on the exact side; partial pivoting on floats.
template <class S>
S det(const Mat<S>& m) {
  int n = m.n();
  if (n == 0) return S(1);
  Mat<S> a(m);
  int sign = 1;
  if constexpr (Sc<S>::exact) {
    S prev(1);
    for (int k = 0; k < n - 1; ++k) {
      int piv = k;
      while (piv < n && Sc<S>::is_zero(a(piv, k))) ++piv;
      if (piv == n) return S(0);
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        sign = -sign;
      }
      for (int i = k + 1; i < n; ++i) {
        for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        a(i, k) = 0;
      }
      prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : S(-a(n - 1, n - 1));
  } else {
    S d(1);
    for (int k = 0; k < n; ++k) {
      int piv = k;
      for (int i = k + 1; i < n; ++i)
        if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
      if (a(piv, k) == 0) return 0;
      if (piv != k) {
        for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        sign = -sign;
      }
      d *= a(k, k);
      for (int i = k + 1; i < n; ++i) {
        S f = a(i, k) / a(k, k);
        for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      }
    }
    return sign * d;
  }
}

template <class S>
Mat<S> submatrix(const Mat<S>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size() || rows.empty())
    throw Error(Err::ModelMismatch, "minor needs equally many rows and columns");
  int k = static_cast<int>(rows.size());
  Mat<S> r(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (rows[i] < 0 || rows[i] >= m.n() || cols[j] < 0 || cols[j] >= m.n())
        throw Error(Err::ModelMismatch, "minor index out of range");
      r(i, j) = m(rows[i], cols[j]);
    }
  return r;
}

template <class S>
S minor(const Mat<S>& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  return det(submatrix(m, rows, cols));
}

template <class S>
Mat<S> inverse(const Mat<S>& m) {
  int n = m.n();
  Mat<S> a(m), r = Mat<S>::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    if constexpr (Sc<S>::exact) {
      while (piv < n && Sc<S>::is_zero(a(piv, k))) ++piv;
      if (piv == n) throw Error(Err::SingularCell, "singular matrix");
    } else {
      for (int i = k + 1; i < n; ++i)
        if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
      if (Sc<S>::is_zero(a(piv, k))) throw Error(Err::SingularCell, "singular matrix");
    }
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(r(k, j), r(piv, j));
      }
    S inv = S(1) / a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) *= inv;
      r(k, j) *= inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || Sc<S>::is_zero(a(i, k))) continue;
      S f = a(i, k);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        r(i, j) -= f * r(k, j);
      }
    }
  }
  return r;
}

template <class S>
struct ULFactors {
  Mat<S> u;   // block unit upper triangular
  Mat<S> lw;  // block lower triangular
};

// m = U * Lw with respect to a partition of the indices into consecutive blocks.
// Eliminates from the last block upward; each trailing diagonal block of the
// running Schur complement must be invertible.
template <class S>
ULFactors<S> block_ul_factor(const Mat<S>& m, const std::vector<int>& blocks) {
  int n = m.n();
  std::vector<int> start{0};
  for (int b : blocks) start.push_back(start.back() + b);
  if (start.back() != n) throw Error(Err::ModelMismatch, "block sizes do not sum to the dimension");
  Mat<S> s(m), u = Mat<S>::identity(n), l(n);
  for (int k = static_cast<int>(blocks.size()) - 1; k >= 0; --k) {
    int b0 = start[k], b1 = start[k + 1];
    std::vector<int> idx;
    for (int i = b0; i < b1; ++i) idx.push_back(i);
    Mat<S> d = submatrix(s, idx, idx);
    if (Sc<S>::is_zero(det(d)))
      throw Error(Err::SingularCell, "trailing block " + std::to_string(k), "not in the open cell");
    Mat<S> dinv = inverse(d);
    for (int i = b0; i < b1; ++i)
      for (int j = 0; j < b1; ++j) l(i, j) = s(i, j);
    for (int i = 0; i < b0; ++i)
      for (int j = b0; j < b1; ++j) {
        S acc(0);
        for (int t = b0; t < b1; ++t) acc += s(i, t) * dinv(t - b0, j - b0);
        u(i, j) = acc;
      }
    for (int i = 0; i < b0; ++i)
      for (int j = 0; j < b0; ++j) {
        S acc(0);
        for (int t = b0; t < b1; ++t) acc += u(i, t) * s(t, j);
        s(i, j) -= acc;
      }
  }
  return {u, l};
}

template <class S>
ULFactors<S> ul_factor(const Mat<S>& m) {
  return block_ul_factor(m, std::vector<int>(m.n(), 1));
}

}  // namespace posrep
