#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "posrep/group_model.hpp"
#include "posrep/random.hpp"
#include "test_util.hpp"

using namespace posrep;
using M = Mat<Rat>;

namespace {

Rat q(long p, long d = 1) { return Sc<Rat>::from_ratio(p, d); }

// Leibniz expansion: independent of the elimination code.
Rat leibniz_det(const M& m) {
  int n = m.n();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rat total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Rat term(inversions % 2 ? -1 : 1);
    for (int i = 0; i < n; ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

M random_mat(Rng& rng, int n) {
  M m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rand_scalar<Rat>(rng);
  return m;
}

bool unit_upper(const M& m) {
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j <= i; ++j)
      if (m(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool lower(const M& m) {
  for (int i = 0; i < m.n(); ++i)
    for (int j = i + 1; j < m.n(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST(Det, SmallCases) {
  EXPECT_EQ(det(M::identity(3)), 1);
  EXPECT_EQ(det(M{{0, 1}, {-1, 0}}), 1);
  EXPECT_EQ(det(M{{1, 2}, {3, 4}}), -2);
  EXPECT_EQ(det(M{{0, 0}, {0, 0}}), 0);
}

TEST(Det, MatchesLeibnizOnRandomMatrices) {
  Rng rng(1);
  for (int it = 0; it < 200; ++it) {
    M m = random_mat(rng, 1 + it % 5);
    if (it % 7 == 0) m(0, 0) = 0;  // force a pivot search
    EXPECT_EQ(det(m), leibniz_det(m));
  }
}

TEST(Det, Multiplicative) {
  Rng rng(2);
  for (int it = 0; it < 100; ++it) {
    M a = random_mat(rng, 4), b = random_mat(rng, 4);
    EXPECT_EQ(det(a * b), det(a) * det(b));
  }
}

TEST(Det, FloatMultiplicativeWithinTolerance) {
  Rng rng(3);
  for (int it = 0; it < 100; ++it) {
    Mat<double> a(4), b(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a(i, j) = rand_scalar<double>(rng);
        b(i, j) = rand_scalar<double>(rng);
      }
    double lhs = det(a * b), rhs = det(a) * det(b);
    EXPECT_LE(std::fabs(lhs - rhs), 1e-9 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST(Minor, Examples) {
  EXPECT_EQ(minor(M::identity(3), {0, 1}, {0, 1}), 1);
  M m{{1, 2, 1}, {0, 1, 1}, {0, 0, 1}};
  EXPECT_EQ(minor(m, {0, 1}, {1, 2}), 1);
  Rng rng(4);
  M r = random_mat(rng, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(minor(r, {i}, {j}), r(i, j));
  EXPECT_THROW(minor(r, {0, 5}, {0, 1}), Error);
}

TEST(Inverse, RandomAndSingular) {
  Rng rng(5);
  for (int it = 0; it < 50; ++it) {
    M m = random_mat(rng, 3);
    if (det(m) == 0) continue;
    EXPECT_TRUE((m * inverse(m)).is_identity());
  }
  try {
    inverse(M{{1, 2}, {2, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::SingularCell);
  }
}

TEST(ULFactor, Identity) {
  auto f = ul_factor(M::identity(3));
  EXPECT_TRUE(f.u.is_identity());
  EXPECT_TRUE(f.lw.is_identity());
}

TEST(ULFactor, TwoByTwoClosedForm) {
  // solve [[0,1],[-1,t]] = [[1,x],[0,1]] [[a,0],[c,d]] entrywise:
  // d = t, c = -1, x d = 1, a + x c = 0  =>  x = 1/t, a = 1/t
  for (long t : {1L, 2L, 5L, -3L}) {
    auto f = ul_factor(M{{0, 1}, {-1, q(t)}});
    EXPECT_EQ(f.u, (M{{1, q(1, t)}, {0, 1}}));
    EXPECT_EQ(f.lw, (M{{q(1, t), 0}, {-1, q(t)}}));
  }
}

TEST(ULFactor, SingularCell) {
  try {
    ul_factor(M{{0, 1}, {-1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::SingularCell);
  }
}

TEST(ULFactor, UniqueOnRandomProducts) {
  Rng rng(6);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + it % 4;
    M u = M::identity(n), l(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j > i) u(i, j) = rand_scalar<Rat>(rng);
        if (j < i) l(i, j) = rand_scalar<Rat>(rng);
        if (j == i) l(i, j) = rand_nonzero<Rat>(rng);
      }
    auto f = ul_factor(u * l);
    EXPECT_EQ(f.u, u);
    EXPECT_EQ(f.lw, l);
    EXPECT_TRUE(unit_upper(f.u));
    EXPECT_TRUE(lower(f.lw));
  }
}

TEST(BigCell, OmegaAndSl2Examples) {
  auto m = GroupModel<Rat>::sl(2);
  auto bc = m.big_cell(m.omega());
  EXPECT_TRUE(bc.u.is_identity());
  EXPECT_TRUE(bc.p.is_identity());
  for (long t : {1L, 3L, -2L}) {
    M g{{-1, 0}, {q(-t), -1}};
    auto f = m.big_cell(g);
    EXPECT_EQ(f.u * f.omega * f.p, g);
    EXPECT_TRUE(m.in_unipotent(f.u));
    EXPECT_TRUE(m.in_parabolic(f.p, +1));
    // g = w u(t)^{-1} w, whose big-cell unipotent is u(1/t)
    EXPECT_EQ(f.u, (M{{1, q(1, t)}, {0, 1}}));
  }
  try {
    m.big_cell(M::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Err::SingularCell);
  }
}

TEST(BigCell, ReproducesRandomCellElementsExactly) {
  for (auto spec : {"sl:3", "sp:2", "so:1,2"}) {
    auto m = GroupModel<Rat>::parse(spec);
    Rng rng(7);
    for (int it = 0; it < 300; ++it) {
      M g = random_unipotent(m, rng) * m.omega() * random_levi(m, rng, false) * random_unipotent(m, rng);
      auto f = m.big_cell(g);
      EXPECT_EQ(f.u * f.omega * f.p, g) << spec;
      EXPECT_TRUE(m.in_unipotent(f.u));
      EXPECT_TRUE(m.in_parabolic(f.p, +1));
    }
  }
}

TEST(BigCell, FloatWithinTolerance) {
  auto m = GroupModel<double>::sl(3);
  Rng rng(8);
  for (int it = 0; it < 300; ++it) {
    Mat<double> g = random_unipotent(m, rng) * m.omega() * random_levi(m, rng, false) * random_unipotent(m, rng);
    auto f = m.big_cell(g);
    Mat<double> r = f.u * f.omega * f.p;
    for (size_t i = 0; i < r.flat().size(); ++i) EXPECT_NEAR(r.flat()[i], g.flat()[i], 1e-9);
  }
}

TEST(Scalar, CanonicalPrinting) {
  EXPECT_EQ(Sc<Rat>::str(Sc<Rat>::parse("4/6")), "2/3");
  EXPECT_EQ(Sc<Rat>::str(Sc<Rat>::parse("-0.25")), "-1/4");
  EXPECT_EQ(Sc<Rat>::str(Sc<Rat>::parse("3/-6")), "-1/2");
  EXPECT_EQ(Sc<double>::str(0.1), "0.1");
  EXPECT_THROW(Sc<Rat>::parse("1/0"), Error);
  EXPECT_THROW(Sc<Rat>::parse("abc"), Error);
}
