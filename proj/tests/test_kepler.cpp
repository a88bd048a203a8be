#include <gtest/gtest.h>

#include <numbers>

#include "confham/kepler.hpp"
#include "confham/sampling.hpp"
#include "fixtures.hpp"

namespace confham {
namespace {

using testing::expect_near;
using testing::kCircular;
using testing::kElliptic;
using testing::kHyperbolic;

const KeplerParams P;

TEST(KeplerParams, DefaultsAndValidation) {
  const KeplerParams q = KeplerParams::make(2.0, 3.0, 1.5);
  EXPECT_EQ(q.l, 2.0 * 4.0 * 3.0);
  EXPECT_NO_THROW(q.validate());
  EXPECT_THROW(KeplerParams::make(-1.0, 1.0, 1.0).validate(), Error);
  EXPECT_THROW(KeplerParams::make(1.0, 1.0, 0.0).validate(), Error);
}

TEST(VectorField, WorkedValues) {
  const TangentE v = kepler_vector_field(kCircular, P);
  expect_near(v.dr, {0, 1, 0}, 0);
  expect_near(v.dp, {-1, 0, 0}, 0);

  const PhasePointE rest{{0, 2, 0}, {}};
  const TangentE w = kepler_vector_field(rest, P);
  expect_near(w.dr, {}, 0);
  expect_near(w.dp, {0, -0.25, 0}, 1e-15);
}

TEST(VectorField, InverseSquareHomogeneity) {
  const PhasePointE x{{0.3, -0.4, 0.9}, {0.2, 0.5, -0.1}};
  const PhasePointE y{3.0 * x.r, x.p};
  const TangentE a = kepler_vector_field(x, P), b = kepler_vector_field(y, P);
  expect_near(b.dp, a.dp / 9.0, 1e-15);
}

TEST(VectorField, CollisionIsADomainError) {
  EXPECT_THROW(kepler_vector_field(PhasePointE{{}, {0, 1, 0}}, P), Error);
}

TEST(EnergyMomentum, WorkedValues) {
  EnergyMomentum j = energy_momentum(kCircular, P);
  EXPECT_DOUBLE_EQ(j.E, -0.5);
  expect_near(j.L, {0, 0, 1}, 0);
  expect_near(j.eps, {}, 1e-15);

  j = energy_momentum(kElliptic, P);
  EXPECT_NEAR(j.E, -0.32, 1e-15);
  expect_near(j.L, {0, 0, 1.2}, 1e-15);
  expect_near(j.eps, {-0.28, 0, 0}, 1e-15);

  j = energy_momentum(kHyperbolic, P);
  EXPECT_DOUBLE_EQ(j.E, 1.0);
  expect_near(j.L, {0, 0, 2}, 0);
  expect_near(j.eps, {3, 0, 0}, 1e-15);
}

TEST(EnergyMomentum, ConicRelationAndOrthogonality) {
  Sampler smp(11);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 200; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      const EnergyMomentum j = energy_momentum(x, P);
      EXPECT_NEAR(dot(j.L, j.eps), 0.0, 1e-12);
      EXPECT_NEAR(norm2(j.eps), 1.0 + 2.0 * j.E * norm2(j.L), 1e-12);
    }
  }
}

TEST(EnergyClass, Branches) {
  EXPECT_EQ(energy_class(-0.5), Signature::elliptic);
  EXPECT_EQ(energy_class(1.0), Signature::hyperbolic);
  EXPECT_FALSE(energy_class(0.0).has_value());
  EXPECT_FALSE(energy_class(1e-14).has_value());
  EXPECT_FALSE(energy_class(testing::kParabolic, P).has_value());
  EXPECT_EQ(energy_class(kElliptic, P), Signature::elliptic);
}

TEST(Hodograph, WorkedValues) {
  HodographCircle c = hodograph(kCircular, P);
  expect_near(c.c, {}, 1e-15);
  EXPECT_DOUBLE_EQ(c.radius, 1.0);
  EXPECT_NEAR(2.0 * energy(kCircular, P), norm2(c.c) - c.radius * c.radius, 1e-15);

  c = hodograph(kElliptic, P);
  EXPECT_NEAR(c.radius, 1.0 / 1.2, 1e-15);
  EXPECT_NEAR(norm2(c.c), -0.64 + 1.0 / 1.44, 1e-14);
  EXPECT_NEAR(norm(kElliptic.p - c.c), c.radius, 1e-12);
}

TEST(Hodograph, ConstantAlongOrbit) {
  const double T = kepler_period(kElliptic, P);
  std::vector<double> times;
  for (int j = 1; j <= 20; ++j) times.push_back(T * j / 20);
  const HodographCircle c0 = hodograph(kElliptic, P);
  for (const PhasePointE& y : kepler_orbit(kElliptic, times, P)) {
    const HodographCircle c = hodograph(y, P);
    EXPECT_NEAR(norm(y.p - c.c), c.radius, 1e-12);
    EXPECT_NEAR(norm(y.p - c0.c), c0.radius, 1e-8);
    EXPECT_NEAR(c.radius, c0.radius, 1e-8);
  }
}

TEST(Hodograph, CollisionOrbitIsDegenerate) {
  try {
    hodograph(PhasePointE{{1, 0, 0}, {0.5, 0, 0}}, P);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
}

TEST(Flow, PeriodOfWorkedPoints) {
  EXPECT_NEAR(kepler_period(kCircular, P), 2 * std::numbers::pi, 1e-14);
  // a = 1 / (2 * 0.32)
  EXPECT_NEAR(kepler_period(kElliptic, P), 2 * std::numbers::pi * std::pow(1.5625, 1.5), 1e-12);
  EXPECT_THROW(kepler_period(kHyperbolic, P), Error);
}

TEST(Flow, FirstIntegralsConserved) {
  const EnergyMomentum j0 = energy_momentum(kElliptic, P);
  const PhasePointE y = kepler_flow(kElliptic, kepler_period(kElliptic, P), P);
  const EnergyMomentum j = energy_momentum(y, P);
  EXPECT_NEAR(j.E, j0.E, 1e-9);
  expect_near(j.L, j0.L, 1e-9);
  expect_near(j.eps, j0.eps, 1e-9);
  EXPECT_LT(testing::distance(y, kElliptic), 1e-8);
}

TEST(Flow, CollisionGuard) {
  const PhasePointE radial{{1, 0, 0}, {0, 0, 0}};
  try {
    kepler_flow(radial, 2.0, P);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::collision);
  }
}

TEST(Flow, ScalesWithParameters) {
  // With m = 2, k = 3 the circular orbit of radius 1 has |p| = m sqrt(k).
  const KeplerParams Q = KeplerParams::make(2.0, 3.0, 1.0);
  const PhasePointE x{{1, 0, 0}, {0, 2.0 * std::sqrt(3.0), 0}};
  EXPECT_NEAR(norm(eccentricity_vector(x, Q)), 0.0, 1e-14);
  const PhasePointE y = kepler_flow(x, kepler_period(x, Q), Q);
  EXPECT_LT(testing::distance(x, y), 1e-8);
}

}  // namespace
}  // namespace confham
