#include <gtest/gtest.h>

#include "posrep/rep.hpp"
#include "test_util.hpp"

using namespace posrep;
using M = Mat<Rat>;
using GM = GroupModel<Rat>;

namespace {

Rat q(long p, long d = 1) { return Sc<Rat>::from_ratio(p, d); }

TriSurface corpus(const std::string& name) { return TriSurface::load(std::string(POSREP_DATA_DIR) + "/surfaces/" + name + ".surf"); }

// path 0 - 1 - 2 with explicit edge matrices
TreeLocalSystem<Rat> chain() {
  TreeLocalSystem<Rat> sys;
  M a{{1, 2}, {0, 1}}, b{{0, 1}, {-1, 3}};
  sys.add_vertex(0, M::identity(2));
  sys.add_vertex(1, a);
  sys.add_vertex(2, b * a);
  sys.add_edge(0, 1, a);
  sys.add_edge(1, 2, b);
  return sys;
}

}  // namespace

TEST(Transport, Basics) {
  auto sys = chain();
  EXPECT_TRUE(transport(sys, {1}).is_identity());
  EXPECT_TRUE(transport(sys, {0, 1, 0}).is_identity());
  EXPECT_TRUE(transport(sys, {0, 1, 2, 1, 0}).is_identity());
  EXPECT_EQ(transport(sys, {0, 1, 2}), sys.T_edge.at({1, 2}) * sys.T_edge.at({0, 1}));
  EXPECT_FALSE(sys.first_inconsistent_edge().has_value());
  try {
    transport(sys, {0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::NotAPath);
    EXPECT_EQ(e.witness(), "0->2");
  }
  EXPECT_THROW(transport(sys, {}), Error);
}

TEST(RhoFromSystem, ConstantAndTrivial) {
  TreeLocalSystem<Rat> sys;
  M c{{2, 1}, {1, 1}};
  for (int v = 0; v < 4; ++v) sys.add_vertex(v, c);
  for (int v = 0; v < 3; ++v) sys.add_edge(v, v + 1, M::identity(2));
  // shift by one along the path
  EXPECT_TRUE(rho_from_system(sys, {{0, 1}, {1, 2}, {2, 3}}).is_identity());
  auto ch = chain();
  EXPECT_TRUE(rho_from_system(ch, {{0, 0}, {1, 1}, {2, 2}}).is_identity());
}

TEST(RhoFromSystem, DetectsNonInvariance) {
  auto sys = chain();
  try {
    rho_from_system(sys, {{0, 1}, {1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::NotInvariant);
  }
}

TEST(RhoFromSystem, RecoversKnownHolonomy) {
  // T(v_k) = r^{-k}: translation by one has holonomy T(gv)^{-1} T(v) = r
  M r{{2, 1}, {1, 1}};
  TreeLocalSystem<Rat> sys;
  M t = M::identity(2);
  for (int v = 0; v < 5; ++v) {
    sys.add_vertex(v, t);
    if (v) sys.add_edge(v - 1, v, t * inverse(sys.T_vertex.at(v - 1)));
    t = inverse(r) * t;
  }
  EXPECT_EQ(rho_from_system(sys, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}), r);
}

TEST(Adapted, LiftedSystemsAreAdapted) {
  for (auto name : {"torus", "quad", "genus2"}) {
    Complex cx(corpus(name));
    for (auto spec : {"sl:2", "sl:3", "sp:2"}) {
      auto m = GM::parse(spec);
      Rng rng(41);
      auto p = random_params(m, cx, rng, Regime::Transverse);
      auto ls = lift_system(m, cx, p, m.identity());
      EXPECT_FALSE(ls.sys.first_inconsistent_edge().has_value()) << name << " " << spec;
      EXPECT_TRUE(check_adapted(m, ls.sys, ls.framing).ok) << name << " " << spec;
      // perturb one frame by a factor outside P+
      int v = static_cast<int>(cx.g.verts.size()) - 1;
      ls.sys.T_vertex[v] = m.omega() * ls.sys.T_vertex[v];
      auto verdict = check_adapted(m, ls.sys, ls.framing);
      EXPECT_FALSE(verdict.ok);
      EXPECT_EQ(verdict.vertex, v);
    }
  }
  auto m = GM::sl(2);
  EXPECT_TRUE(check_adapted(m, TreeLocalSystem<Rat>{}, TreeFraming<Rat>{}).ok);
}

TEST(InducedFraming, Roundtrip) {
  for (auto name : {"quad", "torus", "sphere4"}) {
    Complex cx(corpus(name));
    auto m = GM::sl(3);
    Rng rng(42);
    auto rep = build_rep(m, cx, random_params(m, cx, rng, Regime::Transverse));
    auto fr = induced_framing(cx.g, cx.fd, rep.framing);
    auto back = framing_from_induced(m, cx.s, cx.g, cx.fd, fr);
    ASSERT_EQ(back.size(), rep.framing.size());
    for (size_t i = 0; i < back.size(); ++i) EXPECT_TRUE(same_flag(m, back[i], rep.framing[i])) << name;
  }
}

TEST(InducedFraming, QuadReadsCornerLabels) {
  Complex cx(corpus("quad"));
  auto m = GM::sl(2);
  PunctureFraming<Rat> F;
  for (int i = 0; i < cx.fd.num_pv(); ++i) F.push_back(Flag<Rat>{M{{1, q(i)}, {0, 1}} * m.omega()});
  auto fr = induced_framing(cx.g, cx.fd, F);
  for (int v = 0; v < 2; ++v) {
    const SideRef& sv = cx.g.verts[v];
    EXPECT_TRUE(same_flag(m, fr.F_top.at(v), F[cx.fd.corner_pv[sv.tri][sv.side]]));
    EXPECT_TRUE(same_flag(m, fr.F_bot.at(v), F[cx.fd.corner_pv[sv.tri][(sv.side + 1) % 3]]));
  }
  // across the edge, F^t(v') = F^b(v)
  EXPECT_TRUE(same_flag(m, fr.F_top.at(1), fr.F_bot.at(0)));
}

TEST(InducedFraming, IncompatibleAcrossEdge) {
  Complex cx(corpus("quad"));
  auto m = GM::sl(2);
  PunctureFraming<Rat> F;
  for (int i = 0; i < cx.fd.num_pv(); ++i) F.push_back(Flag<Rat>{M{{1, q(i)}, {0, 1}} * m.omega()});
  auto fr = induced_framing(cx.g, cx.fd, F);
  fr.F_top.at(1) = Flag<Rat>{M{{1, q(17)}, {0, 1}} * m.omega()};
  try {
    framing_from_induced(m, cx.s, cx.g, cx.fd, fr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::IncompatibleFraming);
    EXPECT_EQ(e.witness().substr(0, 2), "E(");
  }
}
