#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confham/moser.hpp"
#include "confham/numerics.hpp"
#include "confham/sampling.hpp"
#include "fixtures.hpp"

namespace confham {
namespace {

using testing::expect_near;
using testing::kCircular;
using testing::kHyperbolic;
using testing::kParabolic;

const KeplerParams P;

TEST(RhoForEnergy, WorkedValues) {
  EXPECT_DOUBLE_EQ(rho_for_energy(-0.5, P), 1.0);
  EXPECT_NEAR(rho_for_energy(-0.32, P), 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(rho_for_energy(1.0, P), std::numbers::sqrt2);
  EXPECT_THROW(rho_for_energy(0.0, P), Error);
}

TEST(MoserLiftInv, CircularPoint) {
  const CotangentQPoint q = moser_lift_inv(kCircular, 1.0, Signature::elliptic);
  expect_near(q.om, {{0, 1, 0}, 0}, 1e-15);
  expect_near(q.w, {{1, 0, 0}, 0}, 1e-15);
  EXPECT_NEAR(w_norm(q.w, q.sig), 1.0, 1e-15);
}

TEST(MoserLiftInv, LargeMomentumApproachesPole) {
  const double rho = 1.0;
  double prev = -2.0;
  for (double p : {10.0, 100.0, 1000.0}) {
    const CotangentQPoint q = moser_lift_inv(PhasePointE{{1, 0, 0}, {0, p, 0}}, rho,
                                             Signature::elliptic);
    EXPECT_GT(q.om.h, prev);
    prev = q.om.h;
  }
  EXPECT_NEAR(prev, rho, 1e-5);
}

TEST(MoserLiftInv, HyperbolicPoint) {
  const double rho = std::numbers::sqrt2;
  const CotangentQPoint q = moser_lift_inv(kHyperbolic, rho, Signature::hyperbolic);
  const ConstraintResiduals res = residuals(q);
  EXPECT_LT(std::abs(res.quadric), 1e-12);
  EXPECT_LT(std::abs(res.tangency), 1e-12);
  EXPECT_NEAR(w_norm(q.w, q.sig), P.k * P.m * P.m / (rho * rho), 1e-12);
  EXPECT_NEAR(moser_hamiltonian(q, P), 1.0, 1e-12);
}

TEST(MoserLiftInv, ExcludedMomentumSphere) {
  try {
    moser_lift_inv(PhasePointE{{1, 0, 0}, {0, 1, 0}}, 1.0, Signature::hyperbolic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_momentum);
  }
}

TEST(MoserLift, RoundTripsAndPole) {
  const CotangentQPoint q = moser_lift_inv(kCircular, 1.0, Signature::elliptic);
  const PhasePointE x = moser_lift(q);
  expect_near(x.r, kCircular.r, 1e-15);
  expect_near(x.p, kCircular.p, 1e-15);

  CotangentQPoint pole{{{}, 1.0}, {{1, 0, 0}, 0}, Signature::elliptic, 1.0};
  try {
    moser_lift(pole);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::north_pole);
  }
}

TEST(MoserLift, LinearInW) {
  Sampler smp(21);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    const CotangentQPoint q = smp.q_point(sig, 0.9);
    CotangentQPoint q2 = q;
    q2.w = 3.0 * q.w;
    const PhasePointE a = moser_lift(q), b = moser_lift(q2);
    expect_near(b.r, 3.0 * a.r, 1e-13);
    expect_near(b.p, a.p, 0);
  }
}

TEST(MoserLift, RandomRoundTripsAndConstraints) {
  Sampler smp(22);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 1000; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      const double rho = rho_for_energy(energy(x, P), P);
      const CotangentQPoint q = moser_lift_inv(x, rho, sig);
      const ConstraintResiduals res = residuals(q);
      ASSERT_LT(std::abs(res.quadric), 1e-12);
      ASSERT_LT(std::abs(res.tangency), 1e-12);
      ASSERT_LT(testing::distance(moser_lift(q), x), 1e-12);
    }
  }
}

TEST(MoserHamiltonian, CircularImage) {
  const CotangentQPoint q = moser_lift_inv(kCircular, 1.0, Signature::elliptic);
  EXPECT_NEAR(moser_hamiltonian(q, P), -0.5, 1e-15);
}

TEST(MoserHamiltonian, MatchesEnergyOnBothSheets) {
  Sampler smp(23);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 1000; ++i) {
      const CotangentQPoint q = smp.q_point(sig, smp.uniform(0.5, 2.0), true);
      ASSERT_NEAR(moser_hamiltonian(q, P), energy(moser_lift(q), P), 1e-12);
    }
  }
}

TEST(MoserHamiltonian, LevelSetRule) {
  Sampler smp(24);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 200; ++i) {
      const double rho = smp.uniform(0.5, 2.0);
      CotangentQPoint q = smp.q_point(sig, rho);
      q.w = (P.k * P.m * P.m / (rho * rho) / w_norm(q.w, sig)) * q.w;
      EXPECT_NEAR(moser_hamiltonian(q, P), -zeta(sig) * rho * rho / (2 * P.m), 1e-10);
    }
  }
}

TEST(MoserLift, AntipodalMomenta) {
  // p1 . p2 = -zeta rho^2 with p1 parallel to p2.
  const double rho = 1.0;
  const PhasePointE a{{1, 0, 0}, {0, 2, 0}}, b{{1, 0, 0}, {0, -0.5, 0}};
  const CotangentQPoint qa = moser_lift_inv(a, rho, Signature::elliptic);
  const CotangentQPoint qb = moser_lift_inv(b, rho, Signature::elliptic);
  expect_near(qa.om, -1.0 * qb.om, 1e-10);
  const PhasePointE c{{1, 0, 0}, {0, 2, 0}}, d{{1, 0, 0}, {0, 0.5, 0}};
  const CotangentQPoint qc = moser_lift_inv(c, rho, Signature::hyperbolic);
  const CotangentQPoint qd = moser_lift_inv(d, rho, Signature::hyperbolic);
  expect_near(qc.om, -1.0 * qd.om, 1e-10);
}

TEST(MoserLift, AntiSymplectic) {
  Sampler smp(25);
  for (Signature sig : {Signature::elliptic, Signature::hyperbolic}) {
    for (int i = 0; i < 20; ++i) {
      const PhasePointE x = smp.phase_point(sig, P);
      const double rho = rho_for_energy(energy(x, P), P);
      const CotangentQPoint q = moser_lift_inv(x, rho, sig);
      const auto lift = [&](const Vec8& v) {
        return to_vector(moser_lift(CotangentQPoint{om_part(v), w_part(v), sig, rho}));
      };
      const Eigen::MatrixXd D = jacobian_fd(lift, to_vector(q.om, q.w));
      const auto B = tangent_basis_q(q.om, q.w, sig);
      for (int a = 0; a < 6; ++a) {
        for (int b = a + 1; b < 6; ++b) {
          const Vec8 u = B.col(a), v = B.col(b);
          const double we = two_form_e(tangent_e_from(D * u), tangent_e_from(D * v));
          const double wq = two_form_q(q.om, q.w, sig, tangent_q_from(u), tangent_q_from(v));
          EXPECT_NEAR(we, -wq, 1e-6);
        }
      }
    }
  }
}

TEST(ParabolicLift, WorkedPoint) {
  const CotangentEPoint q = parabolic_lift(kParabolic, P.l);
  expect_near(q.om, {0, 2, 0}, 1e-15);
  expect_near(q.w, {1, 0, 0}, 1e-15);
  EXPECT_NEAR(norm(q.w), 2 * P.k * P.m * P.m / P.l, 1e-15);
  EXPECT_NEAR(parabolic_hamiltonian(q, P), 0.0, 1e-15);

  CotangentEPoint q2 = q;
  q2.w = 2.0 * q.w;
  EXPECT_GT(parabolic_hamiltonian(q2, P), 0.0);
}

TEST(ParabolicLift, PerpendicularMomentumKeepsWAlongR) {
  const PhasePointE x{{0.3, 0.4, 0}, {-0.8, 0.6, 0.0}};
  const CotangentEPoint q = parabolic_lift(x, 1.7);
  EXPECT_NEAR(norm(cross(q.w, x.r)), 0.0, 1e-15);
}

TEST(ParabolicLift, InvolutionAndHamiltonian) {
  Sampler smp(26);
  for (int i = 0; i < 1000; ++i) {
    const PhasePointE x = i % 3 == 0   ? smp.zero_energy_point(P)
                          : i % 3 == 1 ? smp.phase_point(Signature::elliptic, P)
                                       : smp.phase_point(Signature::hyperbolic, P);
    const CotangentEPoint q = parabolic_lift(x, P.l);
    ASSERT_LT(testing::distance(parabolic_lift(q, P.l), x), 1e-12);
    ASSERT_NEAR(parabolic_hamiltonian(q, P), energy(x, P), 1e-12);
  }
  EXPECT_THROW(parabolic_lift(PhasePointE{{1, 0, 0}, {}}, P.l), Error);
}

}  // namespace
}  // namespace confham
