#include <gtest/gtest.h>

#include "posrep/rep_io.hpp"
#include "test_util.hpp"

using namespace posrep;
using M = Mat<Rat>;
using GM = GroupModel<Rat>;
using F = Flag<Rat>;

namespace {

Rat q(long p, long d = 1) { return Sc<Rat>::from_ratio(p, d); }
M u2(const Rat& t) { return M{{1, t}, {0, 1}}; }

TriSurface corpus(const std::string& name) { return TriSurface::load(std::string(POSREP_DATA_DIR) + "/surfaces/" + name + ".surf"); }

const std::vector<std::string> kSurfaces = {"torus", "sphere3", "quad", "triangle", "pentagon", "sphere4", "genus2", "disc2"};

// SL2 torus parameters: u = (1, 1), l = (diag(2,1/2), diag(3,1/3))
ParamSet<Rat> torus_sl2(const Complex& cx) {
  ParamSet<Rat> p;
  p.u = {u2(q(1)), u2(q(1))};
  p.l[cx.fd.pairings[0]] = M{{2, 0}, {0, q(1, 2)}};
  p.l[cx.fd.pairings[1]] = M{{3, 0}, {0, q(1, 3)}};
  return p;
}

Err code_of(const std::function<void()>& f, std::string* witness = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (witness) *witness = e.witness();
    return e.code();
  }
  return Err::InternalInconsistency;
}

// rho(peripheral word) fixes the flag of the corner where the loop starts
void expect_peripheral_equivariance(const GM& m, const Complex& cx, const FramedRep<Rat>& rep, const std::string& tag) {
  for (int p = 0; p < static_cast<int>(cx.s.punctures().size()); ++p) {
    if (!cx.s.punctures()[p].internal) continue;
    auto loop = peripheral_word(cx.s, cx.fd, p);
    M h = word_matrix(m, rep.rho, loop.word);
    const F& f = rep.framing[cx.fd.corner_pv[loop.start.tri][loop.start.side]];
    EXPECT_TRUE(same_flag(m, act(h, f), f)) << tag << " puncture " << cx.s.punctures()[p].name;
  }
}

}  // namespace

TEST(BuildRep, RoundtripAllSurfaces) {
  for (auto& name : kSurfaces) {
    Complex cx(corpus(name));
    for (auto spec : {"sl:2", "sl:3", "sp:2", "so:1,2"}) {
      auto m = GM::parse(spec);
      Rng rng(51);
      for (int it = 0; it < 3; ++it) {
        auto p = random_params(m, cx, rng, it == 0 ? Regime::Positive : Regime::Transverse);
        auto rep = build_rep(m, cx, p);
        EXPECT_EQ(extract_params(m, cx, rep), p) << name << " " << spec;
        expect_peripheral_equivariance(m, cx, rep, name + " " + spec);
      }
    }
  }
}

TEST(BuildRep, RoundtripWithGauge) {
  Complex cx(corpus("genus2"));
  auto m = GM::sl(3);
  Rng rng(52);
  auto p = random_params(m, cx, rng, Regime::Transverse);
  M g = random_unipotent(m, rng) * m.omega() * random_levi(m, rng, false);
  auto rep = build_rep(m, cx, p, Regime::Transverse, std::optional<M>(g));
  EXPECT_EQ(rep.gauge, g);
  EXPECT_EQ(extract_params(m, cx, rep), p);
}

TEST(BuildRep, QuadrilateralNormalForm) {
  Complex cx(corpus("quad"));
  auto m = GM::sl(2);
  for (auto [t, s] : {std::pair{2L, 3L}, std::pair{1L, 5L}, std::pair{-2L, 7L}}) {
    ParamSet<Rat> p;
    int t0 = cx.s.triangle_by_name("T0"), t1 = cx.s.triangle_by_name("T1");
    p.u.resize(2);
    p.u[t0] = u2(q(t));
    p.u[t1] = u2(q(s));
    auto rep = build_rep(m, cx, p);
    EXPECT_TRUE(rep.rho.empty());
    auto flag = [&](const char* pv) { return rep.framing[cx.fd.pv_by_name(pv)]; };
    // lines: P+ = [1:0], w P+ = [0:1], u(t) w P+ = [t:1], w u(s) w P+ = [-1/s:1]
    EXPECT_TRUE(same_flag(m, flag("p2"), standard_flag(m)));
    EXPECT_TRUE(same_flag(m, flag("p1"), opposite_flag(m)));
    EXPECT_TRUE(same_flag(m, flag("p4"), F{M{{q(t), -1}, {1, 0}}}));
    EXPECT_TRUE(same_flag(m, flag("p3"), F{M{{q(-1, s), -1}, {1, 0}}}));
    bool positive = t > 0 && s > 0;
    EXPECT_EQ(check_positive_rep(m, cx, rep).ok, positive);
  }
}

TEST(BuildRep, TorusSl2Example) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  auto p = torus_sl2(cx);
  auto rep = build_rep(m, cx, p, Regime::Positive);
  EXPECT_EQ(rep.rho.size(), 2u);
  for (auto& [g, r] : rep.rho) EXPECT_TRUE(m.in_group(r));
  EXPECT_EQ(extract_params(m, cx, rep), p);
  EXPECT_TRUE(check_positive_rep(m, cx, rep).ok);
  expect_peripheral_equivariance(m, cx, rep, "torus");
  // holonomy around the puncture is nontrivial
  auto loop = peripheral_word(cx.s, cx.fd, 0);
  EXPECT_FALSE(word_matrix(m, rep.rho, loop.word).is_identity());
}

TEST(BuildRep, RegimeViolations) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  auto p = torus_sl2(cx);
  p.u[1] = m.identity();
  std::string w;
  EXPECT_EQ(code_of([&] { build_rep(m, cx, p); }, &w), Err::RegimeViolation);
  EXPECT_EQ(w, "T1");
  auto p2 = torus_sl2(cx);
  p2.u[0] = u2(q(-1));
  EXPECT_EQ(code_of([&] { build_rep(m, cx, p2, Regime::Positive); }, &w), Err::RegimeViolation);
  EXPECT_EQ(w, "T0");
  auto p3 = torus_sl2(cx);
  p3.l.erase(p3.l.begin());
  EXPECT_EQ(code_of([&] { build_rep(m, cx, p3); }), Err::ModelMismatch);
  auto p4 = torus_sl2(cx);
  p4.l.begin()->second = M{{1, 1}, {0, 1}};
  EXPECT_EQ(code_of([&] { build_rep(m, cx, p4); }), Err::RegimeViolation);
}

TEST(CheckPositive, NegativeParameterGivesWitness) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  auto p = torus_sl2(cx);
  p.u[0] = u2(q(-1));
  auto rep = build_rep(m, cx, p);
  auto v = check_positive_rep(m, cx, rep);
  EXPECT_FALSE(v.ok);
  EXPECT_GE(cx.s.gluing_by_name(v.witness), 0) << v.witness;
}

// Positive parameters <=> positive representation, on random samples.
TEST(CheckPositive, MatchesParameterPositivity) {
  for (auto name : {"torus", "sphere4", "disc2", "pentagon"}) {
    Complex cx(corpus(name));
    for (auto spec : {"sl:2", "sl:3", "sp:2"}) {
      auto m = GM::parse(spec);
      Rng rng(53);
      for (int it = 0; it < 4; ++it) {
        auto p = random_params(m, cx, rng, it % 2 ? Regime::Positive : Regime::Transverse);
        auto rep = build_rep(m, cx, p);
        bool params_positive = is_positive_params(m, cx, p);
        // positivity of a framed rep does not see the gauge, so compare after
        // moving the parameters into the standard positive gauge
        rep.gauge = standard_gauge(m, cx, rep);
        bool std_positive = is_positive_params(m, cx, extract_params(m, cx, rep));
        if (params_positive) {
          EXPECT_TRUE(std_positive) << name << " " << spec;
        }
        EXPECT_EQ(check_positive_rep(m, cx, rep).ok, std_positive) << name << " " << spec;
      }
    }
  }
}

TEST(ExtractParams, NonTransverseEdge) {
  Complex cx(corpus("quad"));
  auto m = GM::sl(2);
  ParamSet<Rat> p;
  p.u = {u2(q(2)), u2(q(3))};
  auto rep = build_rep(m, cx, p);
  rep.framing[cx.fd.pv_by_name("p3")] = rep.framing[cx.fd.pv_by_name("p2")];
  std::string w;
  EXPECT_EQ(code_of([&] { extract_params(m, cx, rep); }, &w), Err::NotTransverse);
  EXPECT_FALSE(w.empty());
}

TEST(ExtractParams, HolonomyMismatch) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  auto rep = build_rep(m, cx, torus_sl2(cx));
  int g = cx.fd.pairings[0];
  rep.rho[g] = rep.rho[g] * M{{1, 1}, {0, 1}} * M{{1, 0}, {1, 1}};
  std::string w;
  Err e = code_of([&] { extract_params(m, cx, rep); }, &w);
  EXPECT_TRUE(e == Err::IncompatibleFraming || e == Err::NotTransverse) << err_name(e);
}

// Replacing the gauge g by l g moves the parameters by the twisted action.
TEST(Gauge, Covariance) {
  for (auto name : {"torus", "sphere4", "genus2"}) {
    Complex cx(corpus(name));
    for (auto spec : {"sl:3", "sp:2", "so:1,2"}) {
      auto m = GM::parse(spec);
      Rng rng(54);
      for (int it = 0; it < 2; ++it) {
        auto p = random_params(m, cx, rng, Regime::Transverse);
        M l = random_levi(m, rng, false);
        auto rep = build_rep(m, cx, p);
        rep.gauge = l * rep.gauge;
        auto q2 = extract_params(m, cx, rep);
        EXPECT_EQ(q2, gauge_action(m, cx, p, l)) << name << " " << spec;
        // rebuilding from the moved parameters gives the same representation
        auto rep2 = build_rep(m, cx, q2, Regime::Transverse, std::optional<M>(rep.gauge));
        for (auto& [g, r] : rep.rho) EXPECT_EQ(rep2.rho.at(g), r);
      }
    }
  }
}

TEST(Gauge, L0PreservesPositivity) {
  Complex cx(corpus("genus2"));
  auto m = GM::sl(3);
  Rng rng(55);
  auto p = random_params(m, cx, rng, Regime::Positive);
  for (int it = 0; it < 5; ++it) {
    M l = random_levi(m, rng, true);
    EXPECT_TRUE(is_positive_params(m, cx, gauge_action(m, cx, p, l)));
  }
}

TEST(Rebase, SameRepresentationNewDomain) {
  Complex cx(corpus("genus2"));
  auto m = GM::sl(2);
  Rng rng(56);
  auto p = random_params(m, cx, rng, Regime::Positive);
  auto rep = build_rep(m, cx, p);
  for (int g : cx.fd.pairings) {
    Complex cx2(cx.s, fundamental_domain(cx.s, {g}));
    auto rep2 = rebase_rep(m, cx, cx2, rep);
    auto p2 = extract_params(m, cx2, rep2);
    auto rep3 = build_rep(m, cx2, p2, Regime::Transverse, std::optional<M>(rep2.gauge));
    for (auto& [h, r] : rep2.rho) EXPECT_EQ(rep3.rho.at(h), r);
    for (size_t i = 0; i < rep2.framing.size(); ++i) EXPECT_TRUE(same_flag(m, rep3.framing[i], rep2.framing[i]));
    EXPECT_TRUE(check_positive_rep(m, cx2, rep2).ok);
  }
}

TEST(Flip, TorusEdgesStayPositive) {
  Complex cx(corpus("torus"));
  for (auto spec : {"sl:2", "sl:3", "sp:2"}) {
    auto m = GM::parse(spec);
    Rng rng(57);
    for (int it = 0; it < 4; ++it) {
      auto p = random_params(m, cx, rng, Regime::Positive);
      for (int g = 0; g < 3; ++g) {
        auto r = flip_invariance_test(m, cx, p, g);
        EXPECT_EQ(r.outcome, FlipOutcome::Positive) << spec << " edge " << g << " " << r.witness;
        ASSERT_TRUE(r.params.has_value());
        // the flipped parameters rebuild into a positive representation
        auto rep = build_rep(m, *r.flipped, *r.params, Regime::Positive);
        EXPECT_TRUE(check_positive_rep(m, *r.flipped, rep).ok);
      }
    }
  }
}

TEST(Flip, QuadrilateralSl2ClosedForm) {
  // flipping the diagonal of [1:0],[t:1]... keeps positivity for positive (t, s)
  Complex cx(corpus("quad"));
  auto m = GM::sl(2);
  ParamSet<Rat> p;
  p.u = {u2(q(2)), u2(q(3))};
  auto r = flip_invariance_test(m, cx, p, 0);
  EXPECT_EQ(r.outcome, FlipOutcome::Positive);
  ASSERT_TRUE(r.params.has_value());
  for (auto& u : r.params->u) EXPECT_TRUE(m.is_positive_unipotent(u));
}

TEST(Flip, TransverseInputNeverReportsFailure) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(3);
  Rng rng(58);
  int inconclusive = 0;
  for (int it = 0; it < 6; ++it) {
    auto p = random_params(m, cx, rng, Regime::Transverse);
    if (is_positive_params(m, cx, p)) continue;
    for (int g = 0; g < 3; ++g) {
      auto r = flip_invariance_test(m, cx, p, g);
      EXPECT_NE(r.outcome, FlipOutcome::NotPositive);
      inconclusive += r.outcome == FlipOutcome::Inconclusive;
    }
  }
  EXPECT_GT(inconclusive, 0);
}

TEST(Flip, Sphere3EdgesAreNotFlippable) {
  Complex cx(corpus("sphere3"));
  auto m = GM::sl(2);
  Rng rng(59);
  auto p = random_params(m, cx, rng, Regime::Positive);
  for (int g = 0; g < 3; ++g) EXPECT_EQ(code_of([&] { flip_invariance_test(m, cx, p, g); }), Err::NotFlippable);
}

TEST(Degenerate, Sl2TorusUniqueFixedLine) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  Rng rng(60);
  M minus{{-1, 0}, {0, -1}};
  for (auto [k1, k2] : {std::pair{m.identity(), m.identity()}, std::pair{minus, m.identity()}, std::pair{minus, minus}}) {
    std::map<int, M> k{{cx.fd.pairings[0], k1}, {cx.fd.pairings[1], k2}};
    auto d = degenerate_rep(m, cx, k, 200, rng);
    EXPECT_TRUE(d.all_unique());
    auto loop = peripheral_word(cx.s, cx.fd, 0);
    M h = word_matrix(m, d.rep.rho, loop.word);
    // +-unipotent: (h - trace/2)^2 = 0 with trace +-2
    Rat tr = h(0, 0) + h(1, 1);
    EXPECT_TRUE(tr == 2 || tr == -2);
    EXPECT_FALSE(h.is_identity());
  }
}

TEST(Degenerate, NotNormalizer) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  Rng rng(61);
  std::map<int, M> k{{cx.fd.pairings[0], M{{2, 0}, {0, q(1, 2)}}}, {cx.fd.pairings[1], m.identity()}};
  std::string w;
  EXPECT_EQ(code_of([&] { degenerate_rep(m, cx, k, 10, rng); }, &w), Err::NotNormalizer);
  EXPECT_EQ(w, cx.s.gluings()[cx.fd.pairings[0]].name);
}

// diag(a, 1/a) u_theta diag(1/a, a) = u(a^2), so the normalizer in the
// diagonal Levi is {I, -I}.
TEST(Degenerate, Sl2CompactPart) {
  auto m = GM::sl(2);
  for (long a : {-3L, -1L, 1L, 2L}) {
    for (long d : {1L, 2L}) {
      M k{{q(a, d), 0}, {0, q(d, a)}};
      bool normalizes = k * m.u_theta() * inverse(k) == m.u_theta();
      EXPECT_EQ(normalizes, a * a == d * d);
    }
  }
}

TEST(Degenerate, HigherRankModels) {
  for (auto spec : {"sl:3", "sp:2"}) {
    auto m = GM::parse(spec);
    Complex cx(corpus("sphere3"));
    Rng rng(62);
    std::map<int, M> k;
    M c = power(m.u_theta() * m.omega(), 3);
    for (int g : cx.fd.pairings) k[g] = c;
    auto d = degenerate_rep(m, cx, k, 150, rng);
    EXPECT_TRUE(d.all_unique()) << spec;
    EXPECT_EQ(d.unique_fixed.size(), 3u);
  }
}

TEST(Retraction, Sl2Midpoint) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  auto p = torus_sl2(cx);
  p.u[0] = u2(q(5));
  auto h = retraction_path(m, cx, p, q(1, 2));
  EXPECT_EQ(h.u[0], u2(q(3)));
  EXPECT_EQ(h.u[1], u2(q(1)));
}

TEST(Retraction, EndpointsAndPositivity) {
  for (auto spec : {"sl:2", "sl:3", "sp:2", "so:1,2"}) {
    auto m = GM::parse(spec);
    Complex cx(corpus("torus"));
    Rng rng(63);
    for (int it = 0; it < 3; ++it) {
      auto p = random_params(m, cx, rng, Regime::Positive);
      EXPECT_EQ(retraction_path(m, cx, p, q(1)), p) << spec;
      auto z = retraction_path(m, cx, p, q(0));
      for (auto& u : z.u) EXPECT_EQ(u, m.u_theta()) << spec;
      for (auto& [g, l] : z.l) {
        EXPECT_EQ(l * m.u_theta() * inverse(l), m.u_theta()) << spec;
        EXPECT_EQ(m.levi_invariant(l), m.levi_invariant(p.l.at(g))) << spec;
      }
      for (int k = 0; k <= 10; ++k) EXPECT_TRUE(is_positive_params(m, cx, retraction_path(m, cx, p, q(k, 10)))) << spec;
    }
  }
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  EXPECT_EQ(code_of([&] { retraction_path(m, cx, torus_sl2(cx), q(3, 2)); }), Err::RegimeViolation);
}

TEST(Census, LabelsAndDeterminism) {
  Complex cx(corpus("torus"));
  auto full = GM::parse("sl:2:full");
  auto h = component_census(full, cx, 200, 7, 1);
  EXPECT_EQ(h.size(), 4u);
  int total = 0;
  for (auto& [lab, c] : h) total += c;
  EXPECT_EQ(total, 200);
  EXPECT_EQ(component_census(full, cx, 200, 7, 3), h);
  EXPECT_EQ(component_census(GM::sl(3), cx, 50, 7, 1).size(), 1u);
  EXPECT_EQ(component_census(GM::sp(2), cx, 200, 7, 1).size(), 4u);
}

TEST(ParamIO, Roundtrip) {
  for (auto name : {"torus", "genus2", "quad"}) {
    Complex cx(corpus(name));
    for (auto spec : {"sl:3", "sp:2", "so:1,2"}) {
      auto m = GM::parse(spec);
      Rng rng(64);
      auto p = random_params(m, cx, rng, Regime::Positive);
      std::string text = format_params(m, cx, p);
      auto pf = parse_params(m, cx, text);
      EXPECT_EQ(pf.params, p) << name << " " << spec;
      EXPECT_EQ(pf.model, m.spec());
      EXPECT_EQ(format_params(m, cx, pf.params), text);
    }
  }
}

TEST(ParamIO, WordAndMatrixPrefixes) {
  Complex cx(corpus("quad"));
  auto m = GM::sl(3);
  auto pf = parse_params(m, cx, "triangle T0: w 1 2 3\ntriangle T1: m 1 2 1  0 1 1  0 0 1\n");
  EXPECT_EQ(pf.params.u[cx.s.triangle_by_name("T0")], m.sl_from_word({q(1), q(2), q(3)}));
  EXPECT_EQ(pf.params.u[cx.s.triangle_by_name("T1")], (M{{1, 2, 1}, {0, 1, 1}, {0, 0, 1}}));
  EXPECT_FALSE(pf.model.has_value());
}

TEST(ParamIO, Errors) {
  Complex cx(corpus("torus"));
  auto m = GM::sl(2);
  std::string w;
  EXPECT_EQ(code_of([&] { parse_params(m, cx, "model: sl:3\n"); }, &w), Err::ModelMismatch);
  EXPECT_EQ(w, "line 1");
  EXPECT_EQ(code_of([&] { parse_params(m, cx, "triangle T0: 1\n"); }), Err::ParseError);
  EXPECT_EQ(code_of([&] { parse_params(m, cx, "triangle T9: 1\n"); }, &w), Err::ParseError);
  EXPECT_EQ(w, "line 1");
  EXPECT_EQ(code_of([&] { parse_params(m, cx, "colour: blue\n"); }), Err::ParseError);
  EXPECT_EQ(code_of([&] { parse_params(m, cx, "# nothing\n\ntriangle T0: x\n"); }, &w), Err::ParseError);
  EXPECT_EQ(w, "line 3");
  std::string ok = format_params(m, cx, torus_sl2(cx));
  EXPECT_EQ(code_of([&] { parse_params(m, cx, ok + "triangle T0: 2\n"); }), Err::ParseError);
  std::string zero = ok;
  zero.replace(zero.rfind(": ") + 2, std::string::npos, "0 5\n");
  EXPECT_EQ(code_of([&] { parse_params(m, cx, zero); }), Err::NotInLevi);
}

TEST(RepIO, Roundtrip) {
  Complex cx(corpus("sphere4"));
  for (auto spec : {"sl:3", "sp:2"}) {
    auto m = GM::parse(spec);
    Rng rng(65);
    for (auto regime : {Regime::Transverse, Regime::Positive}) {
      auto p = random_params(m, cx, rng, regime);
      auto rep = build_rep(m, cx, p);
      std::string text = format_rep(m, cx, rep);
      auto back = parse_rep(m, cx, text);
      EXPECT_EQ(back.rho, rep.rho);
      EXPECT_EQ(extract_params(m, cx, back), p);
      EXPECT_EQ(format_rep(m, cx, back), text);
      // printed flags are echelon forms, often outside G; the verdict must survive
      EXPECT_EQ(check_positive_rep(m, cx, back).ok, check_positive_rep(m, cx, rep).ok) << spec;
    }
  }
}

TEST(FloatBackend, RoundtripWithinTolerance) {
  Complex cx(corpus("torus"));
  auto m = GroupModel<double>::sl(3);
  Rng rng(66);
  auto p = random_params(m, cx, rng, Regime::Positive);
  auto rep = build_rep(m, cx, p);
  auto back = extract_params(m, cx, rep);
  for (size_t t = 0; t < p.u.size(); ++t)
    for (size_t i = 0; i < p.u[t].flat().size(); ++i) EXPECT_NEAR(back.u[t].flat()[i], p.u[t].flat()[i], 1e-7);
  EXPECT_TRUE(check_positive_rep(m, cx, rep).ok);
}
