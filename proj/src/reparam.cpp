#include "confham/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "confham/error.hpp"
#include "confham/integrator.hpp"
#include "confham/numerics.hpp"

namespace confham {

namespace {

PhasePointE as_phase(const Point& x) {
  if (x.size() != 6) throw Error(ErrorKind::invalid_argument, "Kepler point must have 6 entries");
  return phase_point_from(Vec6(x));
}

double lie_derivative(const ScalarField& f, const FieldHandle& X, const Point& x) {
  const Point dir = X(x);
  const auto fv = [&f](const Point& y) {
    Eigen::VectorXd out(1);
    out[0] = f(y);
    return out;
  };
  return directional_fd(fv, x, dir)[0];
}

struct Hermite {
  double h, t;  // interval length, normalised abscissa
  double h00() const { return (1 + 2 * t) * (1 - t) * (1 - t); }
  double h10() const { return t * (1 - t) * (1 - t); }
  double h01() const { return t * t * (3 - 2 * t); }
  double h11() const { return t * t * (t - 1); }
};

}  // namespace

FieldHandle kepler_field_handle(const KeplerParams& params) {
  return [params](const Point& x) -> Point {
    return to_vector(kepler_vector_field(as_phase(x), params));
  };
}

FieldHandle levi_civita_field_handle(const KeplerParams& params) {
  return [params](const Point& x) -> Point {
    const PhasePointE q = as_phase(x);
    return norm(q.r) * to_vector(kepler_vector_field(q, params));
  };
}

ScalarField inverse_radius() {
  return [](const Point& x) { return 1.0 / norm(as_phase(x).r); };
}

double sigma_kepler(double t, const PhasePointE& x, const KeplerParams& params) {
  return (dot(x.p, x.r) - 2.0 * energy(x, params) * t) / (params.m * params.k);
}

SigmaFunction sigma_kepler_function(const KeplerParams& params) {
  return SigmaFunction(
      [params](double t, const Point& x) { return sigma_kepler(t, as_phase(x), params); },
      SigmaFunction::Kind::closed_form);
}

SigmaFunction sigma_numeric(ScalarField sigma_t0, ScalarField g, FieldHandle X, double t0,
                            double tol) {
  auto eval = [sigma_t0 = std::move(sigma_t0), g = std::move(g), X = std::move(X), t0,
               tol](double t, const Point& x) {
    const Eigen::Index n = x.size();
    // State (y, I) with y' = X(y), I' = g(y), run from u = 0 to u = t0 - t.
    auto aug = [&](const Eigen::VectorXd& s) {
      Eigen::VectorXd d(n + 1);
      const Point y = s.head(n);
      d.head(n) = X(y);
      d[n] = g(y);
      return d;
    };
    Eigen::VectorXd s0 = Eigen::VectorXd::Zero(n + 1);
    s0.head(n) = x;
    const Eigen::VectorXd s1 = integrate_rk(aug, s0, t0 - t, tol);
    return sigma_t0(s1.head(n)) - s1[n];
  };
  return SigmaFunction(std::move(eval), SigmaFunction::Kind::numeric);
}

AffinityReport affinity_defect(const ScalarField& g, const ScalarField& sigma_t0,
                               const FieldHandle& X, const Point& x, double T, int n,
                               double tol) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "affinity_defect needs n >= 2");
  std::vector<double> times(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) times[static_cast<std::size_t>(i)] = T * i / (n - 1);
  const auto orbit = integrate_rk_samples([&X](const Eigen::VectorXd& y) { return X(y); },
                                          Eigen::VectorXd(x), times, tol);
  const ScalarField diff = [&](const Point& y) { return g(y) - sigma_t0(y); };

  AffinityReport rep;
  double lo = INFINITY, hi = -INFINITY, llo = INFINITY, lhi = -INFINITY, sum = 0.0;
  for (const auto& y : orbit) {
    const double v = g(y) - lie_derivative(sigma_t0, X, y);
    const double lit = lie_derivative(diff, X, y);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    llo = std::min(llo, lit);
    lhi = std::max(lhi, lit);
    sum += v;
  }
  rep.defect = hi - lo;
  rep.literal_defect = lhi - llo;
  rep.value = sum / static_cast<double>(orbit.size());
  rep.samples = orbit.size();
  return rep;
}

Point xi_map(const Point& x, const SigmaFunction& sigma, const FieldHandle& X, double tol) {
  const double s = sigma(0.0, x);
  if (!std::isfinite(s)) throw Error(ErrorKind::invalid_argument, "sigma(0, x) is undefined");
  return integrate_rk([&X](const Eigen::VectorXd& y) { return X(y); }, Eigen::VectorXd(x), -s,
                      tol);
}

Point xi_map(const Point& x, const SigmaFunction& sigma, const FlowHandle& flow) {
  const double s = sigma(0.0, x);
  if (!std::isfinite(s)) throw Error(ErrorKind::invalid_argument, "sigma(0, x) is undefined");
  return flow(x, -s);
}

ReparametrizedSolution::ReparametrizedSolution(std::vector<double> times,
                                               std::vector<Point> states,
                                               const SigmaFunction& sigma,
                                               const ConformalField& Y)
    : t_(std::move(times)), x_(std::move(states)) {
  if (t_.size() < 2 || t_.size() != x_.size())
    throw Error(ErrorKind::invalid_argument, "need at least two matching time/state samples");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw Error(ErrorKind::invalid_argument, "sample times must be strictly increasing");

  dx_.reserve(x_.size());
  s_.reserve(x_.size());
  ds_.reserve(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) {
    dx_.push_back(Y(x_[i]));
    s_.push_back(sigma(t_[i], x_[i]));
    ds_.push_back(Y.factor(x_[i]));
  }
  increasing_ = s_.back() > s_.front();
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const bool slope_ok = increasing_ ? ds_[i] > 0.0 : ds_[i] < 0.0;
    const bool step_ok = i == 0 || (increasing_ ? s_[i] > s_[i - 1] : s_[i] < s_[i - 1]);
    if (!slope_ok || !step_ok)
      throw Error(ErrorKind::monotonicity,
                  "sigma_phi not strictly monotone near t=" + std::to_string(t_[i]));
  }
}

double ReparametrizedSolution::s_min() const { return std::min(s_.front(), s_.back()); }
double ReparametrizedSolution::s_max() const { return std::max(s_.front(), s_.back()); }

double ReparametrizedSolution::time_at(double s) const {
  if (!(s >= s_min() && s <= s_max()))
    throw Error(ErrorKind::invalid_argument, "s outside the sampled range");
  const double sign = increasing_ ? 1.0 : -1.0;
  // Piece i with sign*s_i <= sign*s <= sign*s_{i+1}.
  auto it = std::lower_bound(s_.begin(), s_.end(), s, [sign](double a, double b) {
    return sign * a < sign * b;
  });
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - s_.begin(), 1)) - 1;
  i = std::min(i, s_.size() - 2);

  const double h = t_[i + 1] - t_[i];
  auto piece = [&](double u) {
    const Hermite b{h, u};
    return b.h00() * s_[i] + b.h10() * h * ds_[i] + b.h01() * s_[i + 1] + b.h11() * h * ds_[i + 1];
  };
  auto dpiece = [&](double u) {
    const double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
    const double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
    return (d00 * s_[i] + d01 * s_[i + 1]) / h + d10 * ds_[i] + d11 * ds_[i + 1];
  };
  double lo = 0.0, hi = 1.0;
  double u = (s - s_[i]) / (s_[i + 1] - s_[i]);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = sign * (piece(u) - s);
    if (f > 0.0) hi = u; else lo = u;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(s)) || hi - lo < 1e-16) break;
    const double df = sign * dpiece(u) * h;
    double un = df > 0.0 ? u - f / df : 0.5 * (lo + hi);
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    u = un;
  }
  return t_[i] + u * h;
}

Point ReparametrizedSolution::phi_at(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t_.begin(), 1)) - 1;
  i = std::min(i, t_.size() - 2);
  const double h = t_[i + 1] - t_[i];
  const Hermite b{h, (t - t_[i]) / h};
  return b.h00() * x_[i] + (b.h10() * h) * dx_[i] + b.h01() * x_[i + 1] +
         (b.h11() * h) * dx_[i + 1];
}

Point ReparametrizedSolution::operator()(double s) const { return phi_at(time_at(s)); }

ReparametrizedSolution reparametrized_solution(std::vector<double> times,
                                               std::vector<Point> states,
                                               const SigmaFunction& sigma,
                                               const ConformalField& Y) {
  return ReparametrizedSolution(std::move(times), std::move(states), sigma, Y);
}

}  // namespace confham
