#pragma once

// Template definitions for GroupModel. Included from group_model.hpp.

#include <algorithm>
#include <sstream>

namespace posrep {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline int parse_int(const std::string& s, const std::string& ctx) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw Error(Err::ParseError, ctx, "bad integer '" + s + "' in model spec '" + ctx + "'");
  }
}

}  // namespace detail

template <class S>
GroupModel<S> GroupModel<S>::parse(const std::string& spec) {
  auto parts = detail::split(spec, ':');
  if (parts.size() < 2) throw Error(Err::ParseError, spec, "model spec must look like sl:N, sp:N or so:P,N");
  const std::string& fam = parts[0];
  if (fam == "sl") {
    bool full = parts.size() == 3 && parts[2] == "full";
    if (parts.size() > 3 || (parts.size() == 3 && !full))
      throw Error(Err::ParseError, spec, "unknown sl option in '" + spec + "'");
    return sl(detail::parse_int(parts[1], spec), full);
  }
  if (parts.size() != 2) throw Error(Err::ParseError, spec, "unexpected suffix in '" + spec + "'");
  if (fam == "sp") return sp(detail::parse_int(parts[1], spec));
  if (fam == "so") {
    auto pn = detail::split(parts[1], ',');
    if (pn.size() != 2) throw Error(Err::ParseError, spec, "so model needs so:P,N");
    return so(detail::parse_int(pn[0], spec), detail::parse_int(pn[1], spec));
  }
  throw Error(Err::ParseError, spec, "unknown family '" + fam + "'");
}

template <class S>
std::string GroupModel<S>::spec() const {
  switch (family_) {
    case Family::SL:
      return "sl:" + std::to_string(n_) + (sl_full_ ? ":full" : "");
    case Family::SP:
      return "sp:" + std::to_string(n_);
    case Family::SO:
      return "so:" + std::to_string(p_) + "," + std::to_string(n_);
  }
  return "";
}

template <class S>
GroupModel<S> GroupModel<S>::sl(int n, bool full_levi) {
  if (n < 2) throw Error(Err::ModelMismatch, "sl:" + std::to_string(n), "SL needs n >= 2");
  GroupModel m;
  m.family_ = Family::SL;
  m.n_ = n;
  m.N_ = n;
  m.sl_full_ = full_levi;
  m.blocks_.assign(n, 1);
  Mat<S> w(n);
  for (int i = 0; i < n; ++i) w(i, n - 1 - i) = (i % 2 == 0) ? S(1) : S(-1);
  if (Sc<S>::sign(det(w)) < 0) w = S(-1) * w;
  m.omega_ = w;
  m.finish();
  return m;
}

template <class S>
GroupModel<S> GroupModel<S>::sp(int n) {
  if (n < 1) throw Error(Err::ModelMismatch, "sp:" + std::to_string(n), "SP needs n >= 1");
  GroupModel m;
  m.family_ = Family::SP;
  m.n_ = n;
  m.N_ = 2 * n;
  m.blocks_ = {n, n};
  Mat<S> j(2 * n);
  for (int i = 0; i < n; ++i) {
    j(i, n + i) = 1;
    j(n + i, i) = -1;
  }
  m.form_ = j;
  m.omega_ = j;
  m.finish();
  return m;
}

template <class S>
GroupModel<S> GroupModel<S>::so(int p, int n) {
  if (p < 1 || n < 2)
    throw Error(Err::ModelMismatch, "so:" + std::to_string(p) + "," + std::to_string(n), "SO needs p >= 1, n >= 2");
  GroupModel m;
  m.family_ = Family::SO;
  m.p_ = p;
  m.n_ = n;
  int N = n + 2 * p + 1;
  m.N_ = N;
  m.blocks_.assign(p, 1);
  m.blocks_.push_back(n + 1);
  for (int i = 0; i < p; ++i) m.blocks_.push_back(1);
  // J_p: antidiagonal signs (-1)^{p+1-a} for a = 1..p+1 (1-based), mirrored; -I in the middle.
  Mat<S> j(N);
  for (int a = 1; a <= p + 1; ++a) {
    S s = ((p + 1 - a) % 2 == 0) ? S(1) : S(-1);
    j(a - 1, N - a) = s;
    j(N - a, a - 1) = s;
  }
  for (int k = p + 1; k < p + n; ++k) j(k, k) = -1;
  m.form_ = j;

  // omega is chosen among signed block reversals by the self-test below.
  m.block_of_.clear();
  for (int b = 0; b < static_cast<int>(m.blocks_.size()); ++b)
    for (int i = 0; i < m.blocks_[b]; ++i) m.block_of_.push_back(b);
  m.u_theta_ = Mat<S>::identity(N);
  {
    SOChart<S> ch;
    ch.C.assign(p, std::vector<S>(p - 1, S(1)));
    ch.V.assign(p, m.w0());
    m.u_theta_ = m.so_from_chart(ch);
  }
  auto cands = m.so_omega_candidates();
  std::optional<Mat<S>> fallback;
  for (auto& w : cands) {
    m.omega_ = w;
    m.omega_inv_ = inverse(w);
    if (!m.self_test()) continue;
    Mat<S> t = power(m.u_theta_ * w, 3);
    if (m.block_upper(t)) {
      fallback.reset();
      m.finish();
      return m;
    }
    if (!fallback) fallback = w;
  }
  if (!fallback) throw Error(Err::ConventionFailure, m.spec(), "no omega candidate passes the positivity self-test");
  m.omega_ = *fallback;
  m.finish();
  return m;
}

template <class S>
std::vector<Mat<S>> GroupModel<S>::so_omega_candidates() const {
  // Antidiagonal on the isotropic coordinates (signs t_a), and a signed
  // permutation of W preserving J0 that fixes or swaps the null pair and acts
  // diagonally on the middle coordinates.
  int p = p_, n = n_, N = N_;
  std::vector<Mat<S>> ys;
  int mid = n - 1;
  for (int swap = 0; swap < 2; ++swap)
    for (int nullsign = 0; nullsign < 2; ++nullsign)
      for (int mask = 0; mask < (1 << mid); ++mask) {
        Mat<S> y(n + 1);
        S s = nullsign ? S(-1) : S(1);
        if (swap) {
          y(0, n) = s;
          y(n, 0) = s;
        } else {
          y(0, 0) = s;
          y(n, n) = s;
        }
        for (int k = 0; k < mid; ++k) y(1 + k, 1 + k) = (mask >> k & 1) ? S(-1) : S(1);
        ys.push_back(y);
      }
  std::vector<Mat<S>> out;
  for (int mask = 0; mask < (1 << p); ++mask) {
    // try the alternating pattern first
    int signs = mask ^ 0x2AAAAAAA;
    for (auto& y : ys) {
      for (int flip = 0; flip < 2; ++flip) {
        Mat<S> w(N);
        for (int a = 0; a < p; ++a) {
          S t = (signs >> a & 1) ? S(-1) : S(1);
          w(N - 1 - a, a) = t;
          w(a, N - 1 - a) = flip ? S(-t) : t;
        }
        for (int i = 0; i <= n; ++i)
          for (int k = 0; k <= n; ++k) w(p + i, p + k) = y(i, k);
        if (!(w.transpose() * *form_ * w == *form_)) continue;
        if (!Sc<S>::eq(det(w), S(1))) continue;
        out.push_back(w);
        break;
      }
    }
  }
  return out;
}

template <class S>
void GroupModel<S>::finish() {
  block_of_.clear();
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b)
    for (int i = 0; i < blocks_[b]; ++i) block_of_.push_back(b);
  omega_inv_ = inverse(omega_);
  switch (family_) {
    case Family::SL:
      u_theta_ = sl_from_word(std::vector<S>(n_ * (n_ - 1) / 2, S(1)));
      break;
    case Family::SP: {
      Mat<S> u = Mat<S>::identity(N_);
      for (int i = 0; i < n_; ++i) u(i, n_ + i) = 1;
      u_theta_ = u;
      break;
    }
    case Family::SO:
      break;  // set during the omega search
  }

  // sign classes of L
  sign_gauges_.clear();
  if (family_ == Family::SL) {
    for (int mask = 0; mask < (1 << n_); ++mask) {
      std::vector<S> d(n_);
      int neg = 0;
      for (int i = 0; i < n_; ++i) {
        d[i] = (mask >> i & 1) ? S(-1) : S(1);
        neg += mask >> i & 1;
      }
      if (neg % 2 == 0) sign_gauges_.push_back(Mat<S>::diag(d));
    }
  } else if (family_ == Family::SP) {
    sign_gauges_.push_back(Mat<S>::identity(N_));
  } else {
    Mat<S> flip = cone_flip();
    for (int mask = 0; mask < (1 << p_); ++mask)
      for (int yf = 0; yf < 2; ++yf) {
        // every combination has determinant 1; together they meet each L0 coset
        std::vector<S> xs(p_);
        for (int a = 0; a < p_; ++a) xs[a] = (mask >> a & 1) ? S(-1) : S(1);
        Mat<S> y = yf ? flip : Mat<S>::identity(n_ + 1);
        std::vector<S> c(xs);
        for (auto& v : y.flat()) c.push_back(v);
        sign_gauges_.push_back(levi_from_coords(c));
      }
  }

  // omega must exchange P+ and P-: check on the block pattern
  Mat<S> probe(N_);
  for (int i = 0; i < N_; ++i)
    for (int j = 0; j < N_; ++j)
      if (block_of_[i] <= block_of_[j]) probe(i, j) = S(1 + i + 2 * j);
  if (!block_lower(omega_ * probe * omega_inv_))
    throw Error(Err::ConventionFailure, spec(), "omega does not conjugate P+ to P-");
  if (form_ && !(omega_.transpose() * *form_ * omega_ == *form_))
    throw Error(Err::ConventionFailure, spec(), "omega does not preserve the form");
  if (!self_test()) throw Error(Err::ConventionFailure, spec(), "turn maps do not preserve positivity");
}

template <class S>
bool GroupModel<S>::self_test() const {
  for (int k = 0; k < 3; ++k) {
    Mat<S> u = sample_positive(k);
    if (!is_positive_unipotent(u)) return false;
    try {
      if (!is_positive_unipotent(left_map(u)) || !is_positive_unipotent(right_map(u))) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

template <class S>
std::vector<std::pair<int, int>> GroupModel<S>::cone_data() const {
  switch (family_) {
    case Family::SL:
      return {{1, n_ * (n_ - 1) / 2}};
    case Family::SP:
      return {{n_ * (n_ + 1) / 2, 1}};
    case Family::SO:
      if (p_ == 1) return {{n_ + 1, 1}};
      return {{1, p_ * (p_ - 1)}, {n_ + 1, p_}};
  }
  return {};
}

// ---- membership ----

template <class S>
bool GroupModel<S>::in_group(const Mat<S>& g) const {
  if (g.n() != N_) return false;
  if (!Sc<S>::eq(det(g), S(1))) return false;
  if (form_ && !(g.transpose() * *form_ * g == *form_)) return false;
  return true;
}

template <class S>
void GroupModel<S>::require_group(const Mat<S>& g, const std::string& what) const {
  if (g.n() != N_)
    throw Error(Err::ModelMismatch, what,
                "dimension " + std::to_string(g.n()) + " does not match " + spec());
  if (!in_group(g)) throw Error(Err::NotInGroup, what, "matrix is not in the group of " + spec());
}

template <class S>
bool GroupModel<S>::block_upper(const Mat<S>& g) const {
  for (int i = 0; i < N_; ++i)
    for (int j = 0; j < N_; ++j)
      if (block_of_[i] > block_of_[j] && !Sc<S>::is_zero(g(i, j))) return false;
  return true;
}

template <class S>
bool GroupModel<S>::block_lower(const Mat<S>& g) const {
  for (int i = 0; i < N_; ++i)
    for (int j = 0; j < N_; ++j)
      if (block_of_[i] < block_of_[j] && !Sc<S>::is_zero(g(i, j))) return false;
  return true;
}

template <class S>
bool GroupModel<S>::in_parabolic(const Mat<S>& g, int sign) const {
  require_group(g);
  return sign > 0 ? block_upper(g) : block_lower(g);
}

template <class S>
bool GroupModel<S>::in_levi(const Mat<S>& g) const {
  return in_parabolic(g, +1) && block_lower(g);
}

template <class S>
bool GroupModel<S>::in_unipotent(const Mat<S>& g) const {
  if (g.n() != N_ || !block_upper(g)) return false;
  for (int i = 0; i < N_; ++i)
    for (int j = 0; j < N_; ++j)
      if (block_of_[i] == block_of_[j] && !Sc<S>::eq(g(i, j), i == j ? S(1) : S(0))) return false;
  return in_group(g);
}

// ---- big cell ----

template <class S>
std::optional<BigCell<S>> GroupModel<S>::try_big_cell(const Mat<S>& g) const {
  if (g.n() != N_) throw Error(Err::ModelMismatch, "dimension does not match " + spec());
  try {
    auto f = block_ul_factor(g * omega_inv_, blocks_);
    return BigCell<S>{f.u, omega_inv_ * f.lw * omega_, omega_};
  } catch (const Error& e) {
    if (e.code() == Err::SingularCell) return std::nullopt;
    throw;
  }
}

template <class S>
BigCell<S> GroupModel<S>::big_cell(const Mat<S>& g) const {
  auto r = try_big_cell(g);
  if (!r) throw Error(Err::SingularCell, "matrix is not in the open cell");
  return *r;
}

// ---- SL word ----

template <class S>
Mat<S> GroupModel<S>::sl_x(int i, const S& t) const {
  Mat<S> m = Mat<S>::identity(N_);
  m(i, i + 1) = t;
  return m;
}

template <class S>
Mat<S> GroupModel<S>::sl_from_word(const std::vector<S>& t) const {
  if (static_cast<int>(t.size()) != n_ * (n_ - 1) / 2)
    throw Error(Err::ModelMismatch, "SL word needs " + std::to_string(n_ * (n_ - 1) / 2) + " parameters");
  Mat<S> u = Mat<S>::identity(N_);
  size_t pos = 0;
  for (int k = 1; k < n_; ++k)
    for (int i = k; i >= 1; --i) u = u * sl_x(i - 1, t[pos++]);
  return u;
}

template <class S>
std::optional<std::vector<S>> GroupModel<S>::sl_word(const Mat<S>& u0) const {
  // Peel the last block x_{m-1}(a_{m-1}) ... x_1(a_1) from the right using u^{-1} e_m.
  std::vector<std::vector<S>> blocks(n_);
  Mat<S> u = u0;
  for (int m = n_; m >= 2; --m) {
    Mat<S> ui = inverse(u);
    std::vector<S> z(m);
    for (int i = 0; i < m; ++i) z[i] = ui(i, m - 1);
    std::vector<S> a(m - 1);
    for (int i = 0; i + 1 < m; ++i) {
      if (Sc<S>::is_zero(z[i + 1])) return std::nullopt;
      a[i] = -z[i] / z[i + 1];
    }
    Mat<S> b = Mat<S>::identity(N_);
    for (int i = m - 1; i >= 1; --i) b = b * sl_x(i - 1, a[i - 1]);
    u = u * inverse(b);
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j)
        if ((i >= m - 1 || j >= m - 1) && !Sc<S>::eq(u(i, j), i == j ? S(1) : S(0))) return std::nullopt;
    for (int i = m - 1; i >= 1; --i) blocks[m - 1].push_back(a[i - 1]);
  }
  std::vector<S> out;
  for (int k = 1; k < n_; ++k)
    for (auto& x : blocks[k]) out.push_back(x);
  return out;
}

// ---- SO generators ----

template <class S>
S GroupModel<S>::j0(const std::vector<S>& v) const {
  S mid(0);
  for (int k = 1; k < n_; ++k) mid += v[k] * v[k];
  return v[0] * v[n_] - mid / S(2);
}

template <class S>
S GroupModel<S>::form_pair(const std::vector<S>& a, const std::vector<S>& b) const {
  S mid(0);
  for (int k = 1; k < n_; ++k) mid += a[k] * b[k];
  return (a[0] * b[n_] + a[n_] * b[0] - mid) / S(2);
}

template <class S>
std::vector<S> GroupModel<S>::w0() const {
  std::vector<S> w(n_ + 1, S(0));
  w[0] = 1;
  w[n_] = 1;
  return w;
}

template <class S>
bool GroupModel<S>::in_cone(const std::vector<S>& v) const {
  return Sc<S>::sign(j0(v)) > 0 && Sc<S>::sign(v[0]) > 0;
}

template <class S>
Mat<S> GroupModel<S>::cone_flip() const {
  Mat<S> y(n_ + 1);
  for (int i = 0; i <= n_; ++i) y(i, i) = -1;
  if (n_ % 2 == 0) y(1, 1) = 1;  // keep det 1
  return y;
}

template <class S>
Mat<S> GroupModel<S>::so_ui(int i, const S& c) const {
  Mat<S> m = Mat<S>::identity(N_);
  m(i - 1, i) = c;
  m(N_ - i - 1, N_ - i) = c;
  return m;
}

template <class S>
Mat<S> GroupModel<S>::so_up(const std::vector<S>& v) const {
  Mat<S> m = Mat<S>::identity(N_);
  int r = p_ - 1, last = p_ + n_ + 1;
  for (int k = 0; k <= n_; ++k) m(r, p_ + k) = v[k];
  m(r, last) = j0(v);
  // J0 v = (v_n, -v_1, ..., -v_{n-1}, v_0)
  for (int k = 0; k <= n_; ++k) {
    S jv = (k == 0) ? v[n_] : (k == n_ ? v[0] : S(-v[k]));
    m(p_ + k, last) = jv;
  }
  return m;
}

template <class S>
Mat<S> GroupModel<S>::so_from_chart(const SOChart<S>& ch) const {
  Mat<S> m = Mat<S>::identity(N_);
  for (int i = 0; i < p_; ++i) {
    for (int j = 0; j < p_ - 1; ++j) m = m * so_ui(j + 1, ch.C[i][j]);
    m = m * so_up(ch.V[i]);
  }
  return m;
}

template <class S>
std::optional<SOChart<S>> GroupModel<S>::so_chart(const Mat<S>& u0) const {
  SOChart<S> ch;
  ch.C.assign(p_, std::vector<S>(p_ - 1));
  Mat<S> u = u0;
  for (int k = 0; k < p_; ++k) {
    int col = N_ - 1 - k;
    Mat<S> l = Mat<S>::identity(N_);
    for (int j = 0; j + 1 < p_; ++j) {
      if (Sc<S>::is_zero(u(j + 1, col))) return std::nullopt;
      ch.C[k][j] = u(j, col) / u(j + 1, col);
      l = l * so_ui(j + 1, ch.C[k][j]);
    }
    u = inverse(l) * u;
    std::vector<S> w(n_ + 1), a(n_ + 1);
    for (int i = 0; i <= n_; ++i) w[i] = u(p_ + i, col);
    a[0] = w[n_];
    a[n_] = w[0];
    for (int i = 1; i < n_; ++i) a[i] = -w[i];
    S r = u(p_ - 1, col), ja = j0(a);
    if (Sc<S>::is_zero(r) || Sc<S>::is_zero(ja)) return std::nullopt;
    S kk = ja / r;
    for (auto& x : a) x /= kk;
    ch.V.push_back(a);
    u = inverse(so_up(a)) * u;
  }
  if (!u.is_identity()) return std::nullopt;
  return ch;
}

// ---- unipotent coordinates ----

template <class S>
int GroupModel<S>::coord_count() const {
  switch (family_) {
    case Family::SL:
      return n_ * (n_ - 1) / 2;
    case Family::SP:
      return n_ * (n_ + 1) / 2;
    case Family::SO:
      return p_ * (p_ - 1) + p_ * (n_ + 1);
  }
  return 0;
}

template <class S>
std::optional<std::vector<S>> GroupModel<S>::coords(const Mat<S>& u) const {
  if (!in_unipotent(u)) throw Error(Err::NotUnipotent, "matrix is not in U+ of " + spec());
  std::vector<S> c;
  switch (family_) {
    case Family::SL:
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) c.push_back(u(i, j));
      return c;
    case Family::SP:
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) c.push_back(u(i, n_ + j));
      return c;
    case Family::SO: {
      auto ch = so_chart(u);
      if (!ch) return std::nullopt;
      for (auto& row : ch->C)
        for (auto& x : row) c.push_back(x);
      for (auto& v : ch->V)
        for (auto& x : v) c.push_back(x);
      return c;
    }
  }
  return std::nullopt;
}

template <class S>
Mat<S> GroupModel<S>::from_coords(const std::vector<S>& c) const {
  if (static_cast<int>(c.size()) != coord_count())
    throw Error(Err::ModelMismatch, spec() + " expects " + std::to_string(coord_count()) + " unipotent coordinates, got " +
                                        std::to_string(c.size()));
  Mat<S> u = Mat<S>::identity(N_);
  size_t pos = 0;
  switch (family_) {
    case Family::SL:
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) u(i, j) = c[pos++];
      return u;
    case Family::SP:
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          u(i, n_ + j) = c[pos];
          u(j, n_ + i) = c[pos];
          ++pos;
        }
      return u;
    case Family::SO: {
      SOChart<S> ch;
      ch.C.assign(p_, std::vector<S>(p_ - 1));
      for (int i = 0; i < p_; ++i)
        for (int j = 0; j + 1 < p_; ++j) ch.C[i][j] = c[pos++];
      for (int i = 0; i < p_; ++i) {
        std::vector<S> v(c.begin() + pos, c.begin() + pos + n_ + 1);
        pos += n_ + 1;
        ch.V.push_back(v);
      }
      return so_from_chart(ch);
    }
  }
  return u;
}

template <class S>
bool GroupModel<S>::is_positive_unipotent(const Mat<S>& u) const {
  if (!in_unipotent(u)) throw Error(Err::NotUnipotent, "matrix is not in U+ of " + spec());
  switch (family_) {
    case Family::SL: {
      auto w = sl_word(u);
      if (!w) return false;
      for (auto& x : *w)
        if (Sc<S>::sign(x) <= 0) return false;
      return true;
    }
    case Family::SP: {
      for (int k = 1; k <= n_; ++k) {
        std::vector<int> rows, cols;
        for (int i = 0; i < k; ++i) {
          rows.push_back(i);
          cols.push_back(n_ + i);
        }
        if (Sc<S>::sign(minor(u, rows, cols)) <= 0) return false;
      }
      return true;
    }
    case Family::SO: {
      auto ch = so_chart(u);
      if (!ch) return false;
      for (auto& row : ch->C)
        for (auto& x : row)
          if (Sc<S>::sign(x) <= 0) return false;
      for (auto& v : ch->V)
        if (!in_cone(v)) return false;
      return true;
    }
  }
  return false;
}

template <class S>
bool GroupModel<S>::is_ustar(const Mat<S>& u) const {
  if (!in_unipotent(u)) throw Error(Err::NotUnipotent, "matrix is not in U+ of " + spec());
  return try_big_cell(omega_inv_ * u * omega_).has_value();
}

template <class S>
Mat<S> GroupModel<S>::left_map(const Mat<S>& u) const {
  auto f = try_big_cell(omega_ * inverse(u) * omega_);
  if (!f) throw Error(Err::NotInUstar, "unipotent is not in U+_*");
  return f->u;
}

template <class S>
Mat<S> GroupModel<S>::right_map(const Mat<S>& u) const {
  auto f = try_big_cell(omega_ * u * omega_);
  if (!f) throw Error(Err::NotInUstar, "unipotent is not in U+_*");
  return inverse(f->u);
}

// ---- Levi ----

template <class S>
int GroupModel<S>::levi_coord_count() const {
  switch (family_) {
    case Family::SL:
      return n_;
    case Family::SP:
      return n_ * n_;
    case Family::SO:
      return p_ + (n_ + 1) * (n_ + 1);
  }
  return 0;
}

template <class S>
std::vector<S> GroupModel<S>::levi_coords(const Mat<S>& l) const {
  if (!in_levi(l)) throw Error(Err::NotInLevi, "matrix is not in the Levi factor of " + spec());
  std::vector<S> c;
  switch (family_) {
    case Family::SL:
      for (int i = 0; i < n_; ++i) c.push_back(l(i, i));
      break;
    case Family::SP:
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) c.push_back(l(i, j));
      break;
    case Family::SO:
      for (int a = 0; a < p_; ++a) c.push_back(l(a, a));
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) c.push_back(l(p_ + i, p_ + j));
      break;
  }
  return c;
}

template <class S>
Mat<S> GroupModel<S>::levi_from_coords(const std::vector<S>& c) const {
  if (static_cast<int>(c.size()) != levi_coord_count())
    throw Error(Err::ModelMismatch, spec() + " expects " + std::to_string(levi_coord_count()) + " Levi coordinates, got " +
                                        std::to_string(c.size()));
  Mat<S> l(N_);
  switch (family_) {
    case Family::SL:
      for (int i = 0; i < n_; ++i) l(i, i) = c[i];
      break;
    case Family::SP: {
      Mat<S> a(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) a(i, j) = c[i * n_ + j];
      if (Sc<S>::is_zero(det(a))) throw Error(Err::NotInLevi, "Levi block A is singular");
      Mat<S> d = inverse(a).transpose();
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          l(i, j) = a(i, j);
          l(n_ + i, n_ + j) = d(i, j);
        }
      break;
    }
    case Family::SO:
      for (int a = 0; a < p_; ++a) {
        if (Sc<S>::is_zero(c[a])) throw Error(Err::NotInLevi, "Levi entry x is zero");
        l(a, a) = c[a];
        l(N_ - 1 - a, N_ - 1 - a) = S(1) / c[a];
      }
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) l(p_ + i, p_ + j) = c[p_ + i * (n_ + 1) + j];
      break;
  }
  return l;
}

template <class S>
bool GroupModel<S>::in_L0(const Mat<S>& l) const {
  if (!in_levi(l)) throw Error(Err::NotInLevi, "matrix is not in the Levi factor of " + spec());
  switch (family_) {
    case Family::SL: {
      int s0 = Sc<S>::sign(l(0, 0));
      for (int i = 0; i < n_; ++i) {
        int s = Sc<S>::sign(l(i, i));
        if (s != s0) return false;
      }
      return true;
    }
    case Family::SP:
      return true;
    case Family::SO: {
      // sgn(y) = +1 iff y keeps the cone containing w0
      std::vector<S> w = w0(), yw(n_ + 1, S(0));
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) yw[i] += l(p_ + i, p_ + j) * w[j];
      int sy = Sc<S>::sign(yw[0]) > 0 ? 1 : -1;
      int sig = sy;
      for (int a = 0; a < p_; ++a) {
        int s = Sc<S>::sign(l(a, a));
        if (s != sy) return false;
        sig *= s;
      }
      return sig == 1;
    }
  }
  return false;
}

template <class S>
bool GroupModel<S>::levi_label_trivial() const {
  switch (family_) {
    case Family::SL:
      return !(sl_full_ && n_ % 2 == 0);
    case Family::SP:
      return false;
    case Family::SO:
      return p_ % 2 == 0;
  }
  return true;
}

template <class S>
int GroupModel<S>::levi_invariant(const Mat<S>& l) const {
  if (!in_levi(l)) throw Error(Err::NotInLevi, "matrix is not in the Levi factor of " + spec());
  if (levi_label_trivial()) return 1;
  switch (family_) {
    case Family::SL:
      return Sc<S>::sign(l(0, 0));
    case Family::SP: {
      std::vector<int> idx(n_);
      for (int i = 0; i < n_; ++i) idx[i] = i;
      return Sc<S>::sign(minor(l, idx, idx));
    }
    case Family::SO: {
      std::vector<S> w = w0();
      S first(0);
      for (int j = 0; j <= n_; ++j) first += l(p_, p_ + j) * w[j];
      return Sc<S>::sign(first) > 0 ? 1 : -1;
    }
  }
  return 1;
}

// ---- samples and retraction paths ----

template <class S>
Mat<S> GroupModel<S>::sample_positive(int k) const {
  auto q = [&](int i) { return Sc<S>::from_ratio(1 + (3 * i + 2 * k) % 5, 1 + (i + k) % 3); };
  switch (family_) {
    case Family::SL: {
      std::vector<S> t(n_ * (n_ - 1) / 2);
      for (size_t i = 0; i < t.size(); ++i) t[i] = q(static_cast<int>(i));
      return sl_from_word(t);
    }
    case Family::SP: {
      // B = M^T M + I with M upper triangular
      Mat<S> m(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) m(i, j) = q(i * n_ + j) - S(1);
      Mat<S> b = m.transpose() * m + Mat<S>::identity(n_);
      std::vector<S> c;
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) c.push_back(b(i, j));
      return from_coords(c);
    }
    case Family::SO: {
      SOChart<S> ch;
      ch.C.assign(p_, std::vector<S>(p_ - 1));
      for (int i = 0; i < p_; ++i)
        for (int j = 0; j + 1 < p_; ++j) ch.C[i][j] = q(i * p_ + j);
      for (int i = 0; i < p_; ++i) {
        std::vector<S> v(n_ + 1, S(0));
        S mid(0);
        for (int m = 1; m < n_; ++m) {
          v[m] = q(7 * i + m) - S(2);
          mid += v[m] * v[m];
        }
        v[0] = q(5 * i + 1);
        v[n_] = (mid / S(2) + q(3 * i + 2)) / v[0];
        ch.V.push_back(v);
      }
      return so_from_chart(ch);
    }
  }
  return identity();
}

template <class S>
Mat<S> GroupModel<S>::unipotent_path(const Mat<S>& u, const S& t) const {
  S s = S(1) - t;
  switch (family_) {
    case Family::SL: {
      auto w = sl_word(u);
      if (!w) throw Error(Err::RegimeViolation, "unipotent is outside the word chart");
      for (auto& x : *w) x = t * x + s;
      return sl_from_word(*w);
    }
    case Family::SP: {
      Mat<S> r(u);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(i, n_ + j) = t * u(i, n_ + j) + (i == j ? s : S(0));
      return r;
    }
    case Family::SO: {
      auto ch = so_chart(u);
      if (!ch) throw Error(Err::RegimeViolation, "unipotent is outside the SO chart");
      std::vector<S> w = w0();
      for (auto& row : ch->C)
        for (auto& x : row) x = t * x + s;
      for (auto& v : ch->V)
        for (int i = 0; i <= n_; ++i) v[i] = t * v[i] + s * w[i];
      return so_from_chart(*ch);
    }
  }
  return u;
}

// Boost in SO(J0) sending w0 to a (both on the unit hyperboloid): r_{w0+a} r_{w0}.
template <class S>
Mat<S> GroupModel<S>::so_boost(const std::vector<S>& a) const {
  std::vector<S> w = w0(), s(n_ + 1);
  for (int i = 0; i <= n_; ++i) s[i] = w[i] + a[i];
  S denom = S(1) + form_pair(w, a);
  Mat<S> b(n_ + 1);
  for (int j = 0; j <= n_; ++j) {
    std::vector<S> e(n_ + 1, S(0));
    e[j] = 1;
    S sv = form_pair(s, e) / denom, wv = S(2) * form_pair(w, e);
    for (int i = 0; i <= n_; ++i) b(i, j) = e[i] - sv * s[i] + wv * a[i];
  }
  return b;
}

template <class S>
Mat<S> GroupModel<S>::levi_path(const Mat<S>& l, const S& t) const {
  if (!in_L0(l)) throw Error(Err::RegimeViolation, "Levi element is not in L0");
  S s = S(1) - t;
  auto toward_one = [&](const S& x) {
    S a = Sc<S>::sign(x) > 0 ? x : S(-x);
    S r = t * a + s;
    return Sc<S>::sign(x) > 0 ? r : S(-r);
  };
  switch (family_) {
    case Family::SL: {
      std::vector<S> d(n_);
      S prod(1);
      for (int i = 0; i + 1 < n_; ++i) {
        d[i] = toward_one(l(i, i));
        prod *= d[i];
      }
      d[n_ - 1] = S(1) / prod;
      return Mat<S>::diag(d);
    }
    case Family::SP: {
      // A = P L D U with row pivoting; move L, U to I and |D| to 1.
      Mat<S> a(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) a(i, j) = l(i, j);
      std::vector<int> perm(n_);
      for (int i = 0; i < n_; ++i) perm[i] = i;
      Mat<S> lo = Mat<S>::identity(n_);
      for (int k = 0; k < n_; ++k) {
        int piv = k;
        if constexpr (Sc<S>::exact) {
          while (Sc<S>::is_zero(a(piv, k))) ++piv;
        } else {
          for (int i = k + 1; i < n_; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        }
        if (piv != k) {
          for (int j = 0; j < n_; ++j) std::swap(a(k, j), a(piv, j));
          for (int j = 0; j < k; ++j) std::swap(lo(k, j), lo(piv, j));
          std::swap(perm[k], perm[piv]);
        }
        for (int i = k + 1; i < n_; ++i) {
          S f = a(i, k) / a(k, k);
          lo(i, k) = f;
          for (int j = k; j < n_; ++j) a(i, j) -= f * a(k, j);
        }
      }
      // now P^{-1} A = lo * a, a upper triangular
      Mat<S> pm(n_);
      for (int i = 0; i < n_; ++i) pm(perm[i], i) = 1;
      std::vector<S> dd(n_);
      Mat<S> up = Mat<S>::identity(n_);
      for (int i = 0; i < n_; ++i) {
        dd[i] = toward_one(a(i, i));
        for (int j = i + 1; j < n_; ++j) up(i, j) = t * a(i, j) / a(i, i);
      }
      Mat<S> lt = Mat<S>::identity(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < i; ++j) lt(i, j) = t * lo(i, j);
      Mat<S> at = pm * lt * Mat<S>::diag(dd) * up;
      std::vector<S> c(at.flat());
      return levi_from_coords(c);
    }
    case Family::SO: {
      std::vector<S> c;
      for (int a = 0; a < p_; ++a) c.push_back(toward_one(l(a, a)));
      Mat<S> y(n_ + 1);
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) y(i, j) = l(p_ + i, p_ + j);
      std::vector<S> w = w0(), a(n_ + 1, S(0));
      for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) a[i] += y(i, j) * w[j];
      if (Sc<S>::sign(a[0]) < 0)
        for (auto& x : a) x = -x;
      Mat<S> k1 = inverse(so_boost(a)) * y;
      // stereographic coordinate of a from -w0, scaled by t
      S alpha = form_pair(a, w);
      std::vector<S> xi(n_ + 1);
      for (int i = 0; i <= n_; ++i) xi[i] = t * (a[i] - alpha * w[i]) / (S(1) + alpha);
      S q = -form_pair(xi, xi);
      std::vector<S> at(n_ + 1);
      for (int i = 0; i <= n_; ++i) at[i] = ((S(1) + q) * w[i] + S(2) * xi[i]) / (S(1) - q);
      Mat<S> yt = so_boost(at) * k1;
      for (auto& x : yt.flat()) c.push_back(x);
      return levi_from_coords(c);
    }
  }
  return l;
}

}  // namespace posrep
