#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posrep/mat.hpp"

namespace posrep {

enum class Family { SL, SP, SO };

template <class S>
struct BigCell {
  Mat<S> u;  // in U+
  Mat<S> p;  // in P+
  Mat<S> omega;
};

// Chart for the SO unipotent radical: u = prod_i [prod_j u_j(C[i][j])] u_p(V[i]).
template <class S>
struct SOChart {
  std::vector<std::vector<S>> C;  // p x (p-1)
  std::vector<std::vector<S>> V;  // p vectors in W = R^{n+1}
};

template <class S>
class GroupModel {
 public:
  // "sl:N", "sl:N:full", "sp:N", "so:P,N"
  static GroupModel parse(const std::string& spec);
  static GroupModel sl(int n, bool full_levi = false);
  static GroupModel sp(int n);
  static GroupModel so(int p, int n);

  Family family() const { return family_; }
  int n() const { return n_; }
  int p() const { return p_; }
  int dim() const { return N_; }
  bool sl_full_levi() const { return sl_full_; }
  std::string spec() const;
  const Mat<S>& omega() const { return omega_; }
  const Mat<S>& omega_inv() const { return omega_inv_; }
  const std::optional<Mat<S>>& form() const { return form_; }
  const std::vector<int>& blocks() const { return blocks_; }
  const Mat<S>& u_theta() const { return u_theta_; }
  Mat<S> identity() const { return Mat<S>::identity(N_); }

  // (cone dimension, number of cones n_beta) per positive root type
  std::vector<std::pair<int, int>> cone_data() const;

  bool in_group(const Mat<S>& g) const;
  void require_group(const Mat<S>& g, const std::string& what = "") const;
  bool block_upper(const Mat<S>& g) const;
  bool block_lower(const Mat<S>& g) const;
  bool in_parabolic(const Mat<S>& g, int sign) const;
  bool in_levi(const Mat<S>& g) const;
  bool in_unipotent(const Mat<S>& g) const;

  std::optional<BigCell<S>> try_big_cell(const Mat<S>& g) const;
  BigCell<S> big_cell(const Mat<S>& g) const;

  // Unipotent coordinates. File coordinates: SL strictly-upper entries,
  // SP upper triangle of B, SO the (C, V) chart (may be undefined).
  int coord_count() const;
  std::optional<std::vector<S>> coords(const Mat<S>& u) const;
  Mat<S> from_coords(const std::vector<S>& c) const;
  bool is_positive_unipotent(const Mat<S>& u) const;
  bool is_ustar(const Mat<S>& u) const;

  // SL reduced word (s1)(s2 s1)(s3 s2 s1)...
  std::optional<std::vector<S>> sl_word(const Mat<S>& u) const;
  Mat<S> sl_from_word(const std::vector<S>& t) const;
  Mat<S> sl_x(int i, const S& t) const;

  // SO generators and chart
  S j0(const std::vector<S>& v) const;
  std::vector<S> w0() const;
  Mat<S> so_ui(int i, const S& c) const;  // 1 <= i <= p-1
  Mat<S> so_up(const std::vector<S>& v) const;
  std::optional<SOChart<S>> so_chart(const Mat<S>& u) const;
  Mat<S> so_from_chart(const SOChart<S>& ch) const;
  bool in_cone(const std::vector<S>& v) const;
  Mat<S> cone_flip() const;  // element of SO(J0) exchanging the two cones
  S form_pair(const std::vector<S>& a, const std::vector<S>& b) const;  // j0 polarized
  Mat<S> so_boost(const std::vector<S>& a) const;  // SO(J0) element taking w0 to a, j0(a,a) = 1

  // Levi factor
  int levi_coord_count() const;
  std::vector<S> levi_coords(const Mat<S>& l) const;
  Mat<S> levi_from_coords(const std::vector<S>& c) const;
  bool in_L0(const Mat<S>& l) const;
  int levi_invariant(const Mat<S>& l) const;  // +1 / -1; +1 whenever the label is trivial
  bool levi_label_trivial() const;
  // Representatives of the sign classes of L used when searching for a gauge
  // that makes a unipotent positive.
  const std::vector<Mat<S>>& sign_gauges() const { return sign_gauges_; }

  // Turn maps on U+_*: L(u) from w u^{-1} w, R(u) from w u w.
  Mat<S> left_map(const Mat<S>& u) const;
  Mat<S> right_map(const Mat<S>& u) const;

  // Retraction helpers: straight path toward u_theta in cone coordinates,
  // and a rational path from a Levi element into the compact part.
  Mat<S> unipotent_path(const Mat<S>& u, const S& t) const;
  Mat<S> levi_path(const Mat<S>& l, const S& t) const;

  // Deterministic positive samples used by the convention self-test.
  Mat<S> sample_positive(int k) const;

 private:
  GroupModel() = default;
  void finish();
  bool self_test() const;
  std::vector<Mat<S>> so_omega_candidates() const;

  Family family_ = Family::SL;
  int n_ = 0, p_ = 0, N_ = 0;
  bool sl_full_ = false;
  Mat<S> omega_, omega_inv_, u_theta_;
  std::optional<Mat<S>> form_;
  std::vector<int> blocks_, block_of_;
  std::vector<Mat<S>> sign_gauges_;
};

}  // namespace posrep

#include "posrep/group_model_impl.hpp"
