#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "confham/numerics.hpp"
#include "confham/reparam.hpp"
#include "fixtures.hpp"

namespace confham {
namespace {

using testing::kCircular;
using testing::kElliptic;

const KeplerParams P;

Point pt(std::initializer_list<double> v) {
  Point x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// Harmonic oscillator X = (v, -x) and its closed-form flow.
Point harmonic(const Point& y) { return pt({y[1], -y[0]}); }
Point harmonic_flow(const Point& y, double t) {
  return pt({y[0] * std::cos(t) + y[1] * std::sin(t), y[1] * std::cos(t) - y[0] * std::sin(t)});
}

TEST(SigmaKepler, WorkedValues) {
  for (double t : {0.0, 0.7, -3.0}) EXPECT_NEAR(sigma_kepler(t, kCircular, P), t, 1e-15);
  EXPECT_DOUBLE_EQ(sigma_kepler(0.0, PhasePointE{{1, 2, 0}, {0.5, 0.25, 1}}, P), 1.0);
}

TEST(SigmaKepler, DerivativeAlongOrbitIsInverseRadius) {
  const PhasePointE x{{1.5, 0.2, 0}, {-0.3, 0.7, 0.1}};
  const double h = 1e-4;
  for (double t : {0.3, 1.1, 2.9, 4.4}) {
    const auto ys = kepler_orbit(x, {t - h, t, t + h}, P);
    const double d =
        (sigma_kepler(t + h, ys[2], P) - sigma_kepler(t - h, ys[0], P)) / (2 * h);
    EXPECT_NEAR(d, 1.0 / norm(ys[1].r), 1e-7) << "t=" << t;
  }
}

TEST(SigmaNumeric, UnitFactorGivesTime) {
  const SigmaFunction s = sigma_numeric([](const Point&) { return 0.0; },
                                        [](const Point&) { return 1.0; }, harmonic, 0.0);
  EXPECT_EQ(s.kind(), SigmaFunction::Kind::numeric);
  for (double t : {-1.0, 0.0, 0.5, 2.0}) EXPECT_NEAR(s(t, pt({0.3, -0.8})), t, 1e-10);
}

TEST(SigmaNumeric, MatchesKeplerClosedForm) {
  const ScalarField sigma0 = [](const Point& x) {
    const Vec6 v = x;
    const PhasePointE y = phase_point_from(v);
    return dot(y.p, y.r) / (P.m * P.k);
  };
  const SigmaFunction s = sigma_numeric(sigma0, inverse_radius(), kepler_field_handle(P), 0.0);
  const SigmaFunction c = sigma_kepler_function(P);
  for (const PhasePointE& x : {kElliptic, PhasePointE{{0.8, 0.4, -0.2}, {0.1, 1.3, 0.2}}}) {
    for (double t : {-0.5, 0.4, 1.7}) {
      EXPECT_NEAR(s(t, to_vector(x)), c(t, to_vector(x)), 1e-7);
    }
  }
}

TEST(SigmaNumeric, ShiftOfInitialValue) {
  const ScalarField g = [](const Point& y) { return 1.0 + 0.5 * y[0] * y[0]; };
  const SigmaFunction a = sigma_numeric([](const Point& y) { return y[1]; }, g, harmonic, 0.3);
  const SigmaFunction b =
      sigma_numeric([](const Point& y) { return y[1] + 2.5; }, g, harmonic, 0.3);
  for (double t : {-0.4, 1.2}) EXPECT_NEAR(b(t, pt({0.6, 0.2})) - a(t, pt({0.6, 0.2})), 2.5, 1e-12);
}

TEST(Affinity, KeplerPair) {
  const ScalarField sigma0 = [](const Point& x) {
    const Vec6 v = x;
    const PhasePointE y = phase_point_from(v);
    return dot(y.p, y.r) / (P.m * P.k);
  };
  const double T = kepler_period(kElliptic, P);
  const AffinityReport r =
      affinity_defect(inverse_radius(), sigma0, kepler_field_handle(P), to_vector(kElliptic), T, 40);
  EXPECT_LT(r.defect, 1e-8);
  EXPECT_NEAR(r.value, -2.0 * energy(kElliptic, P) / (P.m * P.k), 1e-7);
  // The literal reading of the criterion is not constant on the same pair.
  EXPECT_GT(r.literal_defect, 1e-3);
}

TEST(Affinity, ConstantFactorIsExactlyAffine) {
  const AffinityReport r = affinity_defect([](const Point&) { return 3.0; },
                                           [](const Point&) { return 0.0; },
                                           kepler_field_handle(P), to_vector(kElliptic), 5.0, 10);
  EXPECT_EQ(r.defect, 0.0);
}

TEST(Affinity, DetectsNonAffineSigma) {
  const AffinityReport r = affinity_defect(inverse_radius(), [](const Point&) { return 0.0; },
                                           kepler_field_handle(P), to_vector(kElliptic),
                                           kepler_period(kElliptic, P), 20);
  EXPECT_GT(r.defect, 1e-3);
}

TEST(XiMap, ZeroSigmaIsIdentity) {
  const SigmaFunction zero([](double, const Point&) { return 0.0; },
                           SigmaFunction::Kind::closed_form);
  const Point x = to_vector(kElliptic);
  EXPECT_EQ(xi_map(x, zero, kepler_field_handle(P)), x);
  EXPECT_EQ(xi_map(pt({0.3, -0.8}), zero, FlowHandle(harmonic_flow)), pt({0.3, -0.8}));
}

// Y = 2X for the oscillator, which is Hamiltonian for omega_2 = omega_1 / 2.
// sigma = t - atan2(v, x) / 2 satisfies d sigma(t, phi(t)) / dt = 2 along Y,
// and Xi halves the phase angle.
TEST(XiMap, HarmonicEquivariance) {
  const SigmaFunction sigma(
      [](double t, const Point& y) { return t - 0.5 * std::atan2(y[1], y[0]); },
      SigmaFunction::Kind::closed_form);
  const FieldHandle Y = [](const Point& y) { return Point(2.0 * harmonic(y)); };
  const Point x = pt({0.9, 0.4});
  for (double t : {0.05, 0.2, 0.5}) {
    const Point lhs = xi_map(integrate_rk(Y, x, t, 1e-12), sigma, harmonic, 1e-12);
    const Point rhs = harmonic_flow(xi_map(x, sigma, FlowHandle(harmonic_flow)), t);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9) << "t=" << t;
  }
  // Xi^* omega_1 = omega_2: the Jacobian determinant is 1/2.
  const Eigen::Vector2d x2 = x;
  const auto J = jacobian_fd(
      [&](const Eigen::Vector2d& y) {
        return Eigen::Vector2d(xi_map(Point(y), sigma, FlowHandle(harmonic_flow)));
      },
      x2);
  EXPECT_NEAR(J.determinant(), 0.5, 1e-8);
}

// sigma = 2t also satisfies the sigma condition for Y = 2X, but then Xi is the
// identity and cannot intertwine the two flows.
TEST(XiMap, HarmonicScaledTimeGivesIdentity) {
  const SigmaFunction sigma([](double t, const Point&) { return 2.0 * t; },
                            SigmaFunction::Kind::closed_form);
  const Point x = pt({0.9, 0.4});
  EXPECT_EQ(xi_map(x, sigma, FlowHandle(harmonic_flow)), x);
  const Point via_y = harmonic_flow(x, 2 * 0.5);
  const Point via_x = harmonic_flow(x, 0.5);
  EXPECT_GT((via_y - via_x).cwiseAbs().maxCoeff(), 0.1);
}

ConformalField kepler_as_conformal() {
  return {levi_civita_field_handle(P), inverse_radius()};
}

TEST(ReparametrizedSolution, UnitFactorIsIdentity) {
  std::vector<double> ts;
  std::vector<Point> xs;
  for (int i = 0; i <= 200; ++i) {
    ts.push_back(0.01 * i);
    xs.push_back(harmonic_flow(pt({1, 0}), ts.back()));
  }
  const SigmaFunction sigma([](double t, const Point&) { return t; },
                            SigmaFunction::Kind::closed_form);
  const ConformalField Y{harmonic, [](const Point&) { return 1.0; }};
  const ReparametrizedSolution psi = reparametrized_solution(ts, xs, sigma, Y);
  for (double s : {0.0, 0.333, 1.0, 1.9}) {
    EXPECT_NEAR(psi.time_at(s), s, 1e-12);
    EXPECT_LT((psi(s) - harmonic_flow(pt({1, 0}), s)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ReparametrizedSolution, CircularOrbitUnchanged) {
  std::vector<double> ts;
  std::vector<Point> xs;
  for (int i = 0; i <= 100; ++i) ts.push_back(2 * std::numbers::pi * i / 100);
  for (const PhasePointE& y : kepler_orbit(kCircular, {ts.begin() + 1, ts.end()}, P))
    xs.push_back(to_vector(y));
  xs.insert(xs.begin(), to_vector(kCircular));
  const ReparametrizedSolution psi =
      reparametrized_solution(ts, xs, sigma_kepler_function(P), kepler_as_conformal());
  for (std::size_t i = 0; i < ts.size(); i += 7)
    EXPECT_LT((psi(ts[i]) - xs[i]).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ReparametrizedSolution, EllipticOrbitSolvesLeviCivitaEquation) {
  const double T = kepler_period(kElliptic, P);
  const int n = 2000;
  std::vector<double> ts{0.0};
  for (int i = 1; i <= n; ++i) ts.push_back(T * i / n);
  std::vector<Point> xs{to_vector(kElliptic)};
  for (const PhasePointE& y : kepler_orbit(kElliptic, {ts.begin() + 1, ts.end()}, P))
    xs.push_back(to_vector(y));
  const ReparametrizedSolution psi =
      reparametrized_solution(ts, xs, sigma_kepler_function(P), kepler_as_conformal());
  const FieldHandle X = levi_civita_field_handle(P);
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double s = psi.s_min() + (psi.s_max() - psi.s_min()) * i / 50;
    const Point d = (psi(s + h) - psi(s - h)) / (2 * h);
    worst = std::max(worst, (d - X(psi(s))).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(ReparametrizedSolution, RejectsSignChangeOfFactor) {
  std::vector<double> ts;
  std::vector<Point> xs;
  for (int i = 0; i <= 20; ++i) {
    ts.push_back(0.1 * i);
    xs.push_back(harmonic_flow(pt({1, 0}), ts.back()));
  }
  const SigmaFunction sigma([](double t, const Point&) { return t; },
                            SigmaFunction::Kind::closed_form);
  const ConformalField Y{harmonic, [](const Point& y) { return y[0]; }};
  try {
    reparametrized_solution(ts, xs, sigma, Y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::monotonicity);
  }
}

}  // namespace
}  // namespace confham
