#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confham/sampling.hpp"
#include "confham/symmetry.hpp"
#include "fixtures.hpp"

namespace confham {
namespace {

using testing::expect_near;
using testing::kCircular;
using testing::kElliptic;

const KeplerParams P;
const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};

TEST(MomentumK, WorkedValues) {
  const MomentumPair k = momentum_K(s_inverse(kCircular, P));
  expect_near(k.K1, {0, 0, -1}, 1e-15);
  expect_near(k.K2, {}, 1e-15);

  const MomentumPair z = momentum_K(CotangentEPoint{{0, 2, 0}, {1, 0, 0}});
  expect_near(z.K1, {0, 0, -2}, 0);
  expect_near(z.K2, {1, 0, 0}, 0);
}

TEST(MomentumK, ZeroEnergyMatchesJ) {
  Sampler smp(41);
  for (int i = 0; i < 100; ++i) {
    const PhasePointE x = smp.zero_energy_point(P);
    const MomentumPair k = momentum_K(parabolic_lift(x, P.l));
    expect_near(k.K1, cross(x.p, x.r), 1e-12);
  }
}

TEST(MomentumK, ConservedAlongDelaunayFlow) {
  Sampler smp(42);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 50; ++i) {
      const DelaunayPoint q = gls_map(smp.phase_point(sig, P), P);
      const MomentumPair k0 = momentum_K(q);
      const double span = 2 * std::numbers::pi / flow_rate(q, P);
      for (int j = 1; j <= 20; ++j) {
        const DelaunayPoint qs = delaunay_flow(q, span * j / 20, P);
        const MomentumPair k = momentum_K(qs);
        const double scale = std::max(1.0, euclidean_norm(qs.om) * euclidean_norm(qs.w));
        ASSERT_LT(std::max(norm(k.K1 - k0.K1), norm(k.K2 - k0.K2)) / scale, 1e-10);
      }
    }
  }
}

TEST(MomentumJ, WorkedValues) {
  MomentumPair j = momentum_J(kCircular, P);
  expect_near(j.K1, {0, 0, -1}, 0);
  expect_near(j.K2, {}, 1e-15);
  j = momentum_J(kElliptic, P);
  expect_near(j.K1, {0, 0, -1.2}, 1e-15);
  expect_near(j.K2, {-0.28, 0, 0}, 1e-15);
}

TEST(MomentumJ, ConservedAlongKeplerFlow) {
  const MomentumPair j0 = momentum_J(kElliptic, P);
  const double T = kepler_period(kElliptic, P);
  for (const PhasePointE& y : kepler_orbit(kElliptic, {0.25 * T, 0.5 * T, T}, P)) {
    const MomentumPair j = momentum_J(y, P);
    expect_near(j.K1, j0.K1, 1e-9);
    expect_near(j.K2, j0.K2, 1e-9);
  }
}

TEST(Intertwine, CircularPoint) {
  const IntertwineResidual r = intertwine_check(kCircular, P);
  EXPECT_LT(r.K1, 1e-15);
  EXPECT_LT(r.K2, 1e-15);
}

TEST(Intertwine, RandomPoints) {
  Sampler smp(43);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 500; ++i) {
      const IntertwineResidual r = intertwine_check(smp.phase_point(sig, P), P);
      ASSERT_LT(r.K1, 1e-8);
      ASSERT_LT(r.K2, 1e-8);
    }
  }
}

TEST(AlgebroidBracket, WorkedValues) {
  for (double e : {-0.7, 0.0, 1.3}) {
    const AlgebroidElement c = algebroid_bracket({e, ex, {}}, {e, ey, {}}, P);
    expect_near(c.u1, {0, 0, -1}, 0);
    expect_near(c.u2, {}, 0);
  }
  AlgebroidElement c = algebroid_bracket({0.0, {}, ex}, {0.0, {}, ey}, P);
  expect_near(c.u1, {}, 0);
  expect_near(c.u2, {}, 0);

  const double e = P.m * P.m * P.m * P.k * P.k / 2;
  c = algebroid_bracket({e, {}, ex}, {e, {}, ey}, P);
  expect_near(c.u1, ez, 0);
  expect_near(c.u2, {}, 0);
}

TEST(AlgebroidBracket, FibreMismatch) {
  try {
    algebroid_bracket({0.1, ex, ey}, {0.2, ey, ex}, P);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::fibre_mismatch);
  }
}

TEST(AlgebroidBracket, AntisymmetryJacobiAndDegeneration) {
  Sampler smp(44);
  for (int i = 0; i < 1000; ++i) {
    const double e = smp.uniform(-2, 2);
    const AlgebroidElement a{e, smp.gaussian_vector(), smp.gaussian_vector()};
    const AlgebroidElement b{e, smp.gaussian_vector(), smp.gaussian_vector()};
    const AlgebroidElement c{e, smp.gaussian_vector(), smp.gaussian_vector()};
    const AlgebroidElement ab = algebroid_bracket(a, b, P), ba = algebroid_bracket(b, a, P);
    ASSERT_LT(testing::max_abs(ab.u1 + ba.u1) + testing::max_abs(ab.u2 + ba.u2), 1e-13);

    const AlgebroidElement j1 = algebroid_bracket(a, algebroid_bracket(b, c, P), P);
    const AlgebroidElement j2 = algebroid_bracket(b, algebroid_bracket(c, a, P), P);
    const AlgebroidElement j3 = algebroid_bracket(c, algebroid_bracket(a, b, P), P);
    ASSERT_LT(testing::max_abs(j1.u1 + j2.u1 + j3.u1) + testing::max_abs(j1.u2 + j2.u2 + j3.u2),
              1e-13);

    AlgebroidElement a0 = a, b0 = b;
    a0.e = b0.e = 0.0;
    const AlgebroidElement s = algebroid_bracket(a0, b0, P);
    expect_near(s.u1, -1.0 * cross(a.u1, b.u1), 0);
  }
}

TEST(PoissonTable, CircularPointRows) {
  const auto table = poisson_table_check(kCircular, P);
  for (const PoissonTableEntry& row : table) {
    EXPECT_LT(row.residual(), 1e-6) << row.name;
    if (row.name == "{Lx,Ly}") EXPECT_NEAR(row.expected, -1.0, 0);
    if (row.name == "{Lx,ex}") EXPECT_EQ(row.expected, 0.0);
  }
}

TEST(PoissonTable, RandomPointsBothBranches) {
  Sampler smp(45);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 50; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      const EnergyMomentum j = energy_momentum(x, P);
      for (const PoissonTableEntry& row : poisson_table_check(x, P)) {
        ASSERT_LT(row.residual(), 1e-6) << row.name;
        if (row.name == "{ey,ez}") ASSERT_NEAR(row.expected, 2 * j.E * j.L.x, 1e-14);
      }
    }
  }
}

TEST(ActionBracket, RotationsAndBoosts) {
  const double e = energy(kCircular, P);
  EXPECT_LT(action_bracket_check({e, ex, {}}, {e, ey, {}}, kCircular, P).residual, 1e-5);
  const AlgebroidElement a{e, {0.3, -0.2, 0.5}, {0.1, 0.4, -0.6}};
  EXPECT_LT(action_bracket_check(a, a, kCircular, P).residual, 1e-8);

  Sampler smp(46);
  const PhasePointE x = smp.phase_point(Signature::elliptic, P);
  const double ex_ = energy(x, P);
  EXPECT_LT(action_bracket_check({ex_, {}, ex}, {ex_, {}, ey}, x, P).residual, 1e-5);
}

TEST(ActionBracket, OffLevelIsRejected) {
  try {
    action_bracket_check({0.3, ex, {}}, {0.3, ey, {}}, kCircular, P);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::fibre_mismatch);
  }
}

}  // namespace
}  // namespace confham
