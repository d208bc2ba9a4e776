#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "posrep/flags.hpp"
#include "posrep/random.hpp"
#include "posrep/surface.hpp"
#include "posrep/tree_system.hpp"

namespace posrep {

// Surface with the combinatorial choices that fix the coordinates.
struct Complex {
  TriSurface s;
  FundamentalDomain fd;
  GammaGraph g;
  Walk walk;

  explicit Complex(TriSurface surf) : s(std::move(surf)), fd(fundamental_domain(s)) { finish(); }
  Complex(TriSurface surf, FundamentalDomain dom) : s(std::move(surf)), fd(std::move(dom)) { finish(); }

  std::string vertex_name(int v) const {
    const SideRef& sv = g.verts[v];
    return "E(" + s.triangles()[sv.tri].name + "," + std::to_string(sv.side) + ")";
  }
  std::string quad_name(int gluing) const { return s.gluings()[gluing].name; }

 private:
  void finish() {
    g = build_gamma(s);
    walk = gamma0_walk(s, g, fd);
  }
};

enum class Regime { Transverse, Positive };

template <class S>
struct ParamSet {
  std::vector<Mat<S>> u;    // per triangle
  std::map<int, Mat<S>> l;  // per pairing gluing

  bool operator==(const ParamSet&) const = default;
};

template <class S>
struct FramedRep {
  std::map<int, Mat<S>> rho;     // per pairing gluing
  PunctureFraming<S> framing;    // per polygon vertex of the fundamental domain
  Mat<S> gauge;
};

// Local system on Gamma_0 plus one translated copy of the b-side triangle of
// each pairing; actions[g] moves the FD copy of that triangle onto the translate.
template <class S>
struct LiftedSystem {
  TreeLocalSystem<S> sys;
  TreeFraming<S> framing;
  std::vector<Mat<S>> uloc;  // per Gamma vertex
  std::map<int, VertexMap> actions;
};

template <class S>
Mat<S> word_matrix(const GroupModel<S>& m, const std::map<int, Mat<S>>& rho, const Word& w) {
  Mat<S> r = m.identity();
  for (auto& [g, e] : w) r = r * (e > 0 ? rho.at(g) : inverse(rho.at(g)));
  return r;
}

template <class S>
void check_regime(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, Regime regime) {
  if (static_cast<int>(p.u.size()) != cx.s.num_triangles())
    throw Error(Err::ModelMismatch, "", "parameter set has the wrong number of triangles");
  for (int t = 0; t < cx.s.num_triangles(); ++t) {
    const std::string& nm = cx.s.triangles()[t].name;
    if (p.u[t].n() != m.dim() || !m.in_unipotent(p.u[t]))
      throw Error(Err::RegimeViolation, nm, "triangle " + nm + ": parameter is not in U+");
    if (regime == Regime::Positive ? !m.is_positive_unipotent(p.u[t]) : !m.is_ustar(p.u[t]))
      throw Error(Err::RegimeViolation, nm,
                  "triangle " + nm + (regime == Regime::Positive ? ": parameter is not positive" : ": parameter is not in U+_*"));
  }
  if (p.l.size() != cx.fd.pairings.size())
    throw Error(Err::ModelMismatch, "", "parameter set has the wrong number of pairings");
  for (int g : cx.fd.pairings) {
    const std::string& nm = cx.s.gluings()[g].name;
    auto it = p.l.find(g);
    if (it == p.l.end()) throw Error(Err::ModelMismatch, nm, "no parameter for pairing " + nm);
    if (it->second.n() != m.dim() || !m.in_levi(it->second) || !m.in_group(it->second))
      throw Error(Err::RegimeViolation, nm, "pairing " + nm + ": parameter is not in L");
    if (regime == Regime::Positive && !m.in_L0(it->second))
      throw Error(Err::RegimeViolation, nm, "pairing " + nm + ": parameter is not in L0");
  }
}

namespace detail {

// Runs the Gamma_0 walk. uloc_at(v, T(v)) supplies the unipotent of vertex v
// once T(v) is known; transports are then forced.
template <class S>
std::vector<Mat<S>> propagate(const GroupModel<S>& m, const Complex& cx, const Mat<S>& base,
                              const std::function<Mat<S>(int, const Mat<S>&)>& uloc_at, std::vector<Mat<S>>& uloc) {
  int V = static_cast<int>(cx.g.verts.size());
  std::vector<Mat<S>> T(V);
  uloc.assign(V, Mat<S>());
  T[cx.walk.base] = base;
  uloc[cx.walk.base] = uloc_at(cx.walk.base, base);
  const Mat<S>& w = m.omega();
  const Mat<S>& wi = m.omega_inv();
  for (const WalkStep& st : cx.walk.steps) {
    const SideRef& from = cx.g.verts[st.from];
    const SideRef& to = cx.g.verts[st.to];
    const Mat<S>& uf = uloc[st.from];
    switch (st.kind) {
      case WalkStep::StarOut:
        if (to.side == (from.side + 1) % 3)
          T[st.to] = m.right_map(uf) * w * T[st.from];
        else
          T[st.to] = w * inverse(uf) * T[st.from];
        break;
      case WalkStep::StarIn:
        if (from.side == (to.side + 1) % 3)
          T[st.to] = wi * inverse(uf) * T[st.from];
        else
          T[st.to] = m.right_map(uf) * wi * T[st.from];
        break;
      case WalkStep::Cross:
        T[st.to] = (st.sign > 0 ? w : wi) * T[st.from];
        break;
    }
    uloc[st.to] = uloc_at(st.to, T[st.to]);
  }
  return T;
}

// Pairing transport from the smaller-triangle side to the larger: l * omega.
// Returns rho(gamma_g) from the vertex frames of both FD sides.
template <class S>
Mat<S> pairing_rho(const GroupModel<S>& m, const Complex& cx, const std::vector<Mat<S>>& T, int g, const Mat<S>& l) {
  const Gluing& gl = cx.s.gluings()[g];
  int va = cx.g.index.at(gl.a), vb = cx.g.index.at(gl.b);
  if (gl.a.tri < gl.b.tri) return inverse(T[va]) * m.omega_inv() * inverse(l) * T[vb];
  return inverse(T[va]) * l * m.omega() * T[vb];
}

template <class S>
Mat<S> pairing_levi(const GroupModel<S>& m, const Complex& cx, const std::vector<Mat<S>>& T, int g, const Mat<S>& rho) {
  const Gluing& gl = cx.s.gluings()[g];
  int va = cx.g.index.at(gl.a), vb = cx.g.index.at(gl.b);
  if (gl.a.tri < gl.b.tri) return T[vb] * inverse(rho) * inverse(T[va]) * m.omega_inv();
  return T[va] * rho * inverse(T[vb]) * m.omega_inv();
}

template <class S>
TreeFraming<S> framing_of(const GroupModel<S>& m, const std::vector<Mat<S>>& T, const std::vector<Mat<S>>& uloc) {
  TreeFraming<S> fr;
  for (int v = 0; v < static_cast<int>(T.size()); ++v) {
    Mat<S> ti = inverse(T[v]);
    fr.F_top.emplace(v, Flag<S>{ti});
    fr.F_bot.emplace(v, Flag<S>{ti * m.omega()});
    fr.F_right.emplace(v, Flag<S>{ti * uloc[v] * m.omega()});
  }
  return fr;
}

}  // namespace detail

// Equivariance across every pairing and fixation by every peripheral loop.
// Returns a description of the first failure.
template <class S>
std::optional<std::string> verify_framing(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep) {
  const auto& fd = cx.fd;
  for (int g : fd.pairings) {
    const Gluing& gl = cx.s.gluings()[g];
    const Mat<S>& r = rep.rho.at(g);
    int k = gl.a.side, l = gl.b.side;
    auto F = [&](int tri, int c) { return rep.framing[fd.corner_pv[tri][c % 3]]; };
    if (!same_flag(m, F(gl.a.tri, k), act(r, F(gl.b.tri, l + 1))) ||
        !same_flag(m, F(gl.a.tri, k + 1), act(r, F(gl.b.tri, l))))
      return "framing is not equivariant across pairing " + gl.name;
  }
  for (int p = 0; p < static_cast<int>(cx.s.punctures().size()); ++p) {
    if (!cx.s.punctures()[p].internal) continue;
    PeripheralLoop loop = peripheral_word(cx.s, fd, p);
    Mat<S> h = word_matrix(m, rep.rho, loop.word);
    const Flag<S>& f = rep.framing[fd.corner_pv[loop.start.tri][loop.start.side]];
    if (!same_flag(m, act(h, f), f)) return "peripheral holonomy does not fix the flag at " + cx.s.punctures()[p].name;
  }
  return std::nullopt;
}

template <class S>
LiftedSystem<S> lift_system(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, const Mat<S>& gauge) {
  LiftedSystem<S> out;
  auto vt = [&](int v) { return cx.g.verts[v]; };
  auto uloc_at = [&](int v, const Mat<S>&) {
    const SideRef& sv = vt(v);
    const Mat<S>& u = p.u[sv.tri];
    int base = cx.g.verts[cx.g.v_tau[sv.tri]].side;
    if (sv.side == base) return u;
    return sv.side == (base + 1) % 3 ? m.right_map(u) : m.left_map(u);
  };
  std::vector<Mat<S>> T = detail::propagate<S>(m, cx, gauge, uloc_at, out.uloc);
  int V = static_cast<int>(T.size());
  for (int v = 0; v < V; ++v) out.sys.add_vertex(v, T[v], cx.vertex_name(v));
  for (auto& st : cx.walk.steps) out.sys.add_edge(st.from, st.to, T[st.to] * inverse(T[st.from]));
  out.framing = detail::framing_of(m, T, out.uloc);

  // translated b-side triangles
  int next = V;
  for (int g : cx.fd.pairings) {
    const Gluing& gl = cx.s.gluings()[g];
    Mat<S> r = detail::pairing_rho(m, cx, T, g, p.l.at(g));
    Mat<S> ri = inverse(r);
    VertexMap act_g;
    for (int k = 0; k < 3; ++k) {
      auto it = cx.g.index.find({gl.b.tri, k});
      if (it == cx.g.index.end()) continue;
      int v = it->second, tv = next++;
      out.sys.add_vertex(tv, T[v] * ri, cx.s.gluings()[g].name + "." + cx.vertex_name(v));
      act_g[v] = tv;
    }
    for (auto& [e, t] : std::map<std::pair<int, int>, Mat<S>>(out.sys.T_edge)) {
      auto a = act_g.find(e.first), b = act_g.find(e.second);
      if (a != act_g.end() && b != act_g.end()) out.sys.add_edge(a->second, b->second, t);
    }
    int va = cx.g.index.at(gl.a), tb = act_g.at(cx.g.index.at(gl.b));
    Mat<S> le = p.l.at(g) * m.omega();
    if (gl.a.tri < gl.b.tri)
      out.sys.add_edge(va, tb, le);
    else
      out.sys.add_edge(tb, va, le);
    out.actions[g] = act_g;
  }
  return out;
}

// Parameters to framed representation. Every postcondition is re-checked;
// a failure there is a bug, reported as InternalInconsistency.
template <class S>
FramedRep<S> build_rep(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p,
                       Regime regime = Regime::Transverse, std::optional<Mat<S>> gauge = std::nullopt) {
  check_regime(m, cx, p, regime);
  FramedRep<S> rep;
  rep.gauge = gauge ? *gauge : m.identity();
  if (gauge) m.require_group(*gauge, "gauge");
  LiftedSystem<S> ls = lift_system(m, cx, p, rep.gauge);
  if (auto bad = ls.sys.first_inconsistent_edge())
    throw Error(Err::InternalInconsistency, ls.sys.name(bad->first), "local system is inconsistent");
  auto ad = check_adapted(m, ls.sys, ls.framing);
  if (!ad.ok) throw Error(Err::InternalInconsistency, cx.vertex_name(ad.vertex), "framing is not adapted");
  try {
    rep.framing = framing_from_induced(m, cx.s, cx.g, cx.fd, ls.framing);
  } catch (const Error& e) {
    throw Error(Err::InternalInconsistency, e.witness(), e.what());
  }
  for (int g : cx.fd.pairings) rep.rho[g] = rho_from_system(ls.sys, ls.actions.at(g));
  if (auto bad = verify_framing(m, cx, rep)) throw Error(Err::InternalInconsistency, "", *bad);
  return rep;
}

// Framed representation to parameters: left inverse of build_rep.
template <class S>
ParamSet<S> extract_params(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep) {
  const auto& fd = cx.fd;
  if (static_cast<int>(rep.framing.size()) != fd.num_pv())
    throw Error(Err::ModelMismatch, "", "framing has the wrong number of puncture lifts");
  for (int g : fd.pairings)
    if (!rep.rho.count(g)) throw Error(Err::ModelMismatch, cx.s.gluings()[g].name, "missing holonomy");
  auto F = [&](int v, int which) {
    const SideRef& sv = cx.g.verts[v];
    return rep.framing[fd.corner_pv[sv.tri][(sv.side + which) % 3]];
  };
  auto uloc_at = [&](int v, const Mat<S>& t) {
    std::string w = cx.vertex_name(v);
    if (!same_flag(m, act(t, F(v, 0)), standard_flag(m)) || !same_flag(m, act(t, F(v, 1)), opposite_flag(m)))
      throw Error(Err::IncompatibleFraming, w, "frame at " + w + " does not normalize its two flags");
    auto bc = m.try_big_cell(t * F(v, 2).rep);
    const SideRef& sv = cx.g.verts[v];
    auto side_name = [&](int k) {
      return "E(" + cx.s.triangles()[sv.tri].name + "," + std::to_string(k % 3) + ")";
    };
    if (!bc) throw Error(Err::NotTransverse, side_name(sv.side + 2), "flags along " + side_name(sv.side + 2) + " are not transverse");
    if (!m.is_ustar(bc->u))
      throw Error(Err::NotTransverse, side_name(sv.side + 1), "flags along " + side_name(sv.side + 1) + " are not transverse");
    return bc->u;
  };
  std::vector<Mat<S>> uloc;
  std::vector<Mat<S>> T = detail::propagate<S>(m, cx, rep.gauge, uloc_at, uloc);
  ParamSet<S> p;
  for (int t = 0; t < cx.s.num_triangles(); ++t) p.u.push_back(uloc[cx.g.v_tau[t]]);
  for (int g : fd.pairings) {
    Mat<S> l = detail::pairing_levi(m, cx, T, g, rep.rho.at(g));
    if (!m.in_levi(l))
      throw Error(Err::IncompatibleFraming, cx.s.gluings()[g].name,
                  "holonomy of " + cx.s.gluings()[g].name + " does not match the framing");
    p.l[g] = l;
  }
  return p;
}

// The parameters seen after replacing the gauge g by l g. Frames move by
// T'(v) = sigma^k(l) T(v) with sigma(x) = w x w^{-1} and k the twist of v.
template <class S>
ParamSet<S> gauge_action(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, const Mat<S>& l) {
  auto lam = [&](int v) {
    int k = cx.walk.twist[v];
    Mat<S> a = l;
    for (int i = 0; i < std::abs(k); ++i) a = k > 0 ? m.omega() * a * m.omega_inv() : m.omega_inv() * a * m.omega();
    return a;
  };
  ParamSet<S> q;
  for (int t = 0; t < cx.s.num_triangles(); ++t) {
    Mat<S> a = lam(cx.g.v_tau[t]);
    q.u.push_back(a * p.u[t] * inverse(a));
  }
  for (int g : cx.fd.pairings) {
    const Gluing& gl = cx.s.gluings()[g];
    SideRef lo = gl.a, hi = gl.b;
    if (hi.tri < lo.tri) std::swap(lo, hi);
    Mat<S> s_lo = m.omega() * lam(cx.g.index.at(lo)) * m.omega_inv();
    q.l[g] = lam(cx.g.index.at(hi)) * p.l.at(g) * inverse(s_lo);
  }
  return q;
}

// Flags of the quadrilateral around an internal edge, counterclockwise:
// (B, C, A, D) with (A, B) the a-side, C and D the opposite corners.
template <class S>
std::vector<Flag<S>> quad_flags(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep, int g) {
  const Gluing& gl = cx.s.gluings()[g];
  const auto& fd = cx.fd;
  int ta = gl.a.tri, sa = gl.a.side, tb = gl.b.tri, sb = gl.b.side;
  auto F = [&](int t, int c) { return rep.framing[fd.corner_pv[t][c % 3]]; };
  Mat<S> d = word_matrix(m, rep.rho, fd.crossing(cx.s, ta, sa));
  return {F(ta, sa + 1), F(ta, sa + 2), F(ta, sa), act(d, F(tb, sb + 2))};
}

struct Verdict {
  bool ok = true;
  std::string witness;
  std::string message;
};

// Positive iff every internal-edge quadrilateral is a positive quadruple; a
// surface without internal edges falls back to its triangles.
template <class S>
Verdict check_positive_rep(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep) {
  for (int g = 0; g < cx.s.num_gluings(); ++g) {
    std::vector<Flag<S>> q = quad_flags(m, cx, rep, g);
    bool ok;
    try {
      ok = is_positive_tuple(m, q);
    } catch (const Error& e) {
      if (e.code() != Err::NotTransverse) throw;
      throw Error(Err::NotTransverse, cx.quad_name(g), "quadrilateral " + cx.quad_name(g) + " is not transverse");
    }
    if (!ok) return {false, cx.quad_name(g), "quadrilateral around " + cx.quad_name(g) + " is not positive"};
  }
  if (cx.s.num_gluings() == 0) {
    for (int t = 0; t < cx.s.num_triangles(); ++t) {
      std::vector<Flag<S>> tri;
      for (int c = 0; c < 3; ++c) tri.push_back(rep.framing[cx.fd.corner_pv[t][c]]);
      if (!is_positive_tuple(m, tri))
        return {false, cx.s.triangles()[t].name, "triangle " + cx.s.triangles()[t].name + " is not positive"};
    }
  }
  return {};
}

template <class S>
bool is_positive_params(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p) {
  try {
    check_regime(m, cx, p, Regime::Positive);
    return true;
  } catch (const Error& e) {
    if (e.code() != Err::RegimeViolation) throw;
    return false;
  }
}

template <class S>
ParamSet<S> random_params(const GroupModel<S>& m, const Complex& cx, Rng& rng, Regime regime) {
  ParamSet<S> p;
  for (int t = 0; t < cx.s.num_triangles(); ++t)
    p.u.push_back(regime == Regime::Positive ? random_positive_unipotent(m, rng) : random_ustar(m, rng));
  for (int g : cx.fd.pairings) p.l[g] = random_levi(m, rng, regime == Regime::Positive);
  return p;
}

// Re-express a framed representation in another fundamental domain of the
// same triangulation.
template <class S>
FramedRep<S> rebase_rep(const GroupModel<S>& m, const Complex& from, const Complex& to, const FramedRep<S>& rep) {
  Rebase rb = rebase(from.s, from.fd, to.fd);
  FramedRep<S> out;
  out.gauge = rep.gauge;
  for (int g : to.fd.pairings) out.rho[g] = word_matrix(m, rep.rho, rb.gen_word.at(g));
  for (int i = 0; i < to.fd.num_pv(); ++i) {
    SideRef c = to.fd.pv_corner[i];
    Mat<S> h = word_matrix(m, rep.rho, rb.tri_word[c.tri]);
    out.framing.push_back(act(h, rep.framing[from.fd.corner_pv[c.tri][c.side]]));
  }
  return out;
}

// Gauge at the base vertex of cx: normalizes its two flags and, if possible,
// makes the base unipotent positive.
template <class S>
Mat<S> standard_gauge(const GroupModel<S>& m, const Complex& cx, const FramedRep<S>& rep) {
  const SideRef& b = cx.g.verts[cx.walk.base];
  auto F = [&](int c) { return rep.framing[cx.fd.corner_pv[b.tri][(b.side + c) % 3]]; };
  Mat<S> g = normalize_pair(m, F(0), F(1), cx.vertex_name(cx.walk.base));
  auto bc = m.try_big_cell(g * F(2).rep);
  if (bc) {
    if (auto l = positivity_gauge(m, bc->u)) return *l * g;
  }
  return g;
}

enum class FlipOutcome { Positive, NotPositive, Inconclusive };

inline const char* flip_outcome_name(FlipOutcome o) {
  switch (o) {
    case FlipOutcome::Positive: return "positive";
    case FlipOutcome::NotPositive: return "not-positive";
    case FlipOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

template <class S>
struct FlipReport {
  FlipOutcome outcome = FlipOutcome::Inconclusive;
  std::string witness;
  std::optional<Complex> flipped;
  std::optional<ParamSet<S>> params;
};

// Build, flip edge g, re-extract in the flipped triangulation and test
// positivity. Merely transverse input gives Inconclusive unless the result
// happens to be positive.
template <class S>
FlipReport<S> flip_invariance_test(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, int g) {
  FlipReport<S> rep_out;
  bool positive_in = is_positive_params(m, cx, p);
  FramedRep<S> rep = build_rep(m, cx, p, positive_in ? Regime::Positive : Regime::Transverse);
  Complex cx2 = cx;
  if (!cx.fd.in_tree[g]) {
    cx2 = Complex(cx.s, fundamental_domain(cx.s, {g}));
    rep = rebase_rep(m, cx, cx2, rep);
  }
  FlipResult fr = flip(cx.s, g);
  Complex cx3(fr.surface, fundamental_domain_from_tree(fr.surface, cx2.fd.in_tree));
  FramedRep<S> rep3;
  rep3.rho = rep.rho;
  for (int i = 0; i < cx3.fd.num_pv(); ++i) {
    SideRef c = cx3.fd.pv_corner[i];
    auto it = fr.corner_source.find(c);
    SideRef src = it == fr.corner_source.end() ? c : it->second;
    rep3.framing.push_back(rep.framing[cx2.fd.corner_pv[src.tri][src.side]]);
  }
  rep_out.flipped = cx3;
  auto fail = [&](const std::string& w) {
    rep_out.outcome = positive_in ? FlipOutcome::NotPositive : FlipOutcome::Inconclusive;
    rep_out.witness = w;
    return rep_out;
  };
  try {
    rep3.gauge = standard_gauge(m, cx3, rep3);
    ParamSet<S> q = extract_params(m, cx3, rep3);
    rep_out.params = q;
    for (int t = 0; t < cx3.s.num_triangles(); ++t)
      if (!m.is_positive_unipotent(q.u[t])) return fail(cx3.s.triangles()[t].name);
    for (auto& [e, l] : q.l)
      if (!m.in_L0(l)) return fail(cx3.s.gluings()[e].name);
  } catch (const Error& e) {
    if (e.code() != Err::NotTransverse) throw;
    return fail(e.witness());
  }
  rep_out.outcome = FlipOutcome::Positive;
  return rep_out;
}

template <class S>
struct DegenerateReport {
  FramedRep<S> rep;
  std::vector<std::pair<std::string, bool>> unique_fixed;  // per internal puncture
  bool all_unique() const {
    return std::all_of(unique_fixed.begin(), unique_fixed.end(), [](auto& x) { return x.second; });
  }
};

// All triangle parameters u_theta, pairing parameters k_e normalizing u_theta.
// Each peripheral holonomy is tested against `trials` challenge flags.
template <class S>
DegenerateReport<S> degenerate_rep(const GroupModel<S>& m, const Complex& cx, const std::map<int, Mat<S>>& k, int trials,
                                   Rng& rng) {
  ParamSet<S> p;
  p.u.assign(cx.s.num_triangles(), m.u_theta());
  for (int g : cx.fd.pairings) {
    const Mat<S>& kg = k.at(g);
    if (!m.in_levi(kg) || !(kg * m.u_theta() * inverse(kg) == m.u_theta()))
      throw Error(Err::NotNormalizer, cx.s.gluings()[g].name,
                  "parameter of " + cx.s.gluings()[g].name + " does not normalize u_theta");
    p.l[g] = kg;
  }
  DegenerateReport<S> out;
  out.rep = build_rep(m, cx, p, Regime::Transverse);
  for (int q = 0; q < static_cast<int>(cx.s.punctures().size()); ++q) {
    if (!cx.s.punctures()[q].internal) continue;
    PeripheralLoop loop = peripheral_word(cx.s, cx.fd, q);
    Mat<S> h = word_matrix(m, out.rep.rho, loop.word);
    const Flag<S>& f = out.rep.framing[cx.fd.corner_pv[loop.start.tri][loop.start.side]];
    Mat<S> x = inverse(f.rep);
    out.unique_fixed.push_back({cx.s.punctures()[q].name, fixes_only_standard_flag(m, x * h * inverse(x), trials, rng)});
  }
  return out;
}

template <class S>
ParamSet<S> retraction_path(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p, const S& t) {
  check_regime(m, cx, p, Regime::Positive);
  if (Sc<S>::sign(t) < 0 || Sc<S>::sign(t - S(1)) > 0) throw Error(Err::RegimeViolation, "t", "t must lie in [0,1]");
  ParamSet<S> q;
  for (auto& u : p.u) q.u.push_back(m.unipotent_path(u, t));
  for (auto& [g, l] : p.l) q.l[g] = m.levi_path(l, t);
  return q;
}

// Levi labels of a parameter set, in pairing order.
template <class S>
std::vector<int> component_label(const GroupModel<S>& m, const Complex& cx, const ParamSet<S>& p) {
  std::vector<int> lab;
  for (int g : cx.fd.pairings) lab.push_back(m.levi_invariant(p.l.at(g)));
  return lab;
}

// Sample i uses the seed split_seed(seed, i), so the histogram does not depend
// on the thread count.
template <class S>
std::map<std::vector<int>, int> component_census(const GroupModel<S>& m, const Complex& cx, int samples,
                                                 std::uint64_t seed, int threads = 0) {
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max(1, samples));
  std::vector<std::vector<int>> labels(samples);
  std::vector<std::exception_ptr> errs(threads);
  auto work = [&](int tid) {
    try {
      for (int i = tid; i < samples; i += threads) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(i)));
        ParamSet<S> p = random_params(m, cx, rng, Regime::Positive);
        check_regime(m, cx, p, Regime::Positive);
        labels[i] = component_label(m, cx, p);
      }
    } catch (...) {
      errs[tid] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  std::map<std::vector<int>, int> hist;
  for (auto& l : labels) ++hist[l];
  return hist;
}

}  // namespace posrep

#include "posrep/rep_io.hpp"
