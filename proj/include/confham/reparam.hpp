#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "confham/kepler.hpp"
#include "confham/phase.hpp"

namespace confham {

// Generic points of a phase-space domain, for the machinery that does not care
// which system it runs on.
using Point = Eigen::VectorXd;
using FieldHandle = std::function<Point(const Point&)>;
using ScalarField = std::function<double(const Point&)>;
// Closed-form flow (x, s) -> Phi_X(s, x), when one is available.
using FlowHandle = std::function<Point(const Point&, double)>;

// Y = g X with g nowhere vanishing on the domain.
struct ConformalField {
  FieldHandle base;
  ScalarField factor;

  Point operator()(const Point& x) const { return factor(x) * base(x); }
};

// Kepler field and 1/r in the generic representation.
FieldHandle kepler_field_handle(const KeplerParams& params);
// X_LC = r X_Kepler = (r p / m, -mk r / r^2); its reparametrisation by g = 1/r
// is the Kepler field.
FieldHandle levi_civita_field_handle(const KeplerParams& params);
ScalarField inverse_radius();

class SigmaFunction {
 public:
  enum class Kind { closed_form, numeric };

  SigmaFunction(std::function<double(double, const Point&)> eval, Kind kind)
      : eval_(std::move(eval)), kind_(kind) {}

  double operator()(double t, const Point& x) const { return eval_(t, x); }
  Kind kind() const { return kind_; }

 private:
  std::function<double(double, const Point&)> eval_;
  Kind kind_;
};

// (p.r - 2 E t) / (mk).
double sigma_kepler(double t, const PhasePointE& x, const KeplerParams& params);
SigmaFunction sigma_kepler_function(const KeplerParams& params);

// sigma(t, x) = sigma_t0(Phi_X(t0 - t, x)) + int_{t0}^{t} g(Phi_X(tau - t, x)) dtau.
// The integral is carried as an extra state of the backward flow, so the
// quadrature error is controlled by the same tolerance as the orbit.
SigmaFunction sigma_numeric(ScalarField sigma_t0, ScalarField g, FieldHandle X, double t0,
                            double tol = 1e-11);

struct AffinityReport {
  // max - min of (g - L_X sigma_t0) along the orbit.
  double defect = 0.0;
  // Mean sampled value of (g - L_X sigma_t0); equals d sigma / dt when the
  // criterion holds.
  double value = 0.0;
  // max - min of L_X (g - sigma_t0), the criterion read literally.
  double literal_defect = 0.0;
  std::size_t samples = 0;
};

// Samples n points of the X-orbit of x over [0, T] (n >= 2). Lie derivatives by
// central differences along X.
AffinityReport affinity_defect(const ScalarField& g, const ScalarField& sigma_t0,
                               const FieldHandle& X, const Point& x, double T, int n,
                               double tol = 1e-11);

// Xi(x) = Phi_X(-sigma(0, x), x), by RK.
Point xi_map(const Point& x, const SigmaFunction& sigma, const FieldHandle& X,
             double tol = 1e-11);
// Same, with a closed-form flow.
Point xi_map(const Point& x, const SigmaFunction& sigma, const FlowHandle& flow);

// psi(s) = phi(sigma_phi^{-1}(s)) from samples of a solution phi of Y = g X.
// phi and sigma_phi are both interpolated by cubic Hermite pieces with slopes
// Y(phi) and g(phi), then sigma_phi is inverted piecewise.
class ReparametrizedSolution {
 public:
  ReparametrizedSolution(std::vector<double> times, std::vector<Point> states,
                         const SigmaFunction& sigma, const ConformalField& Y);

  double s_min() const;
  double s_max() const;
  // Throws invalid_argument outside [s_min, s_max].
  Point operator()(double s) const;
  // t = sigma_phi^{-1}(s).
  double time_at(double s) const;

 private:
  Point phi_at(double t) const;

  std::vector<double> t_;
  std::vector<Point> x_;
  std::vector<Point> dx_;
  std::vector<double> s_;
  std::vector<double> ds_;
  bool increasing_ = true;
};

ReparametrizedSolution reparametrized_solution(std::vector<double> times,
                                               std::vector<Point> states,
                                               const SigmaFunction& sigma,
                                               const ConformalField& Y);

}  // namespace confham
