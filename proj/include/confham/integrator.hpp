#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "confham/error.hpp"

namespace confham {

template <int N>
using State = Eigen::Matrix<double, N, 1>;

struct RkStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace detail {
struct NoGuard {
  template <class S>
  void operator()(const S&) const {}
};
}  // namespace detail

// Dormand-Prince 5(4) pair with FSAL and a PI step-size controller. The state
// is propagated with the fifth-order solution; the embedded fourth-order
// solution only drives the error estimate. Error is measured in the max norm
// with atol = rtol = tol.
//
// Guard is invoked on every accepted state and may throw to abort (the Kepler
// collision guard uses this).
template <class Field, class Vector, class Guard = detail::NoGuard>
class RkIntegrator {
 public:
  RkIntegrator(Field field, Vector x0, double tol, Guard guard = {})
      : field_(std::move(field)), guard_(std::move(guard)), y_(std::move(x0)), tol_(tol) {
    if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "integrator tolerance must be positive");
    k1_ = eval(y_);
  }

  double time() const { return t_; }
  const Vector& state() const { return y_; }
  const RkStats& stats() const { return stats_; }

  // Integrates from the current time to t_target (either direction) and
  // returns the state there.
  const Vector& advance_to(double t_target) {
    const double span = t_target - t_;
    if (span == 0.0) return y_;
    const double dir = span > 0.0 ? 1.0 : -1.0;
    if (h_ == 0.0 || (h_ > 0.0) != (dir > 0.0)) h_ = dir * initial_step(std::abs(span), dir);

    while ((t_target - t_) * dir > 0.0) {
      if (stats_.accepted + stats_.rejected > kMaxSteps)
        throw Error(ErrorKind::non_convergence, "step budget exhausted at t=" + std::to_string(t_));
      const double min_step = 1e-14 * std::max(1.0, std::abs(t_));
      if (std::abs(h_) < min_step)
        throw Error(ErrorKind::non_convergence, "step size collapsed at t=" + std::to_string(t_));

      bool last = false;
      double h = h_;
      if ((t_ + h - t_target) * dir >= 0.0) {
        h = t_target - t_;
        last = true;
      }
      const double err = attempt(h);
      if (!std::isfinite(err)) {
        h_ = 0.25 * h;
        ++stats_.rejected;
        continue;
      }
      if (err <= 1.0) {
        t_ = last ? t_target : t_ + h;
        y_ = y_new_;
        k1_ = k7_;
        ++stats_.accepted;
        guard_(y_);
        const double fac11 = std::pow(std::max(err, 1e-16), kExpo1);
        double fac = fac11 / std::pow(err_old_, kBeta) / kSafety;
        fac = std::clamp(fac, 1.0 / kFacMax, 1.0 / kFacMin);
        err_old_ = std::max(err, 1e-4);
        const double h_next = h / fac;
        // A truncated final step must not shrink the step carried forward.
        h_ = last ? dir * std::max(std::abs(h_), std::abs(h_next)) : h_next;
      } else {
        const double fac11 = std::pow(err, kExpo1);
        h_ = h / std::min(1.0 / kFacMin, fac11 / kSafety);
        ++stats_.rejected;
      }
    }
    return y_;
  }

 private:
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kSafety = 0.9;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;
  static constexpr std::size_t kMaxSteps = 50'000'000;

  Vector eval(const Vector& y) {
    ++stats_.evaluations;
    return field_(y);
  }

  double scaled_max(const Vector& v, const Vector& a, const Vector& b) const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sc = tol_ * (1.0 + std::max(std::abs(a[i]), std::abs(b[i])));
      m = std::max(m, std::abs(v[i]) / sc);
    }
    return m;
  }

  double initial_step(double span, double dir) {
    const Vector zero = Vector::Zero(y_.size());
    const double d0 = scaled_max(y_, y_, zero) * tol_;
    const double d1 = scaled_max(k1_, y_, zero) * tol_;
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Vector y1 = y_ + dir * h0 * k1_;
    Vector f1 = eval(y1);
    const double d2 = scaled_max(Vector(f1 - k1_), y_, zero) * tol_ / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, span});
  }

  double attempt(double h) {
    const Vector& y = y_;
    const Vector k2 = eval(y + h * (a21 * k1_));
    const Vector k3 = eval(y + h * (a31 * k1_ + a32 * k2));
    const Vector k4 = eval(y + h * (a41 * k1_ + a42 * k2 + a43 * k3));
    const Vector k5 = eval(y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = eval(y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new_ = y + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7_ = eval(y_new_);
    const Vector err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7_);
    return scaled_max(err, y, y_new_);
  }

  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  Field field_;
  Guard guard_;
  Vector y_;
  Vector y_new_;
  Vector k1_;
  Vector k7_;
  double t_ = 0.0;
  double h_ = 0.0;
  double tol_;
  double err_old_ = 1e-4;
  RkStats stats_;
};

// Phi_X(t, x0) for the autonomous field X.
template <class Field, class Vector, class Guard = detail::NoGuard>
Vector integrate_rk(Field&& field, const Vector& x0, double t, double tol, Guard guard = {}) {
  RkIntegrator<std::decay_t<Field>, Vector, Guard> rk(std::forward<Field>(field), x0, tol,
                                                      std::move(guard));
  return rk.advance_to(t);
}

// States at each requested time, integrating once through the sorted times
// (all of one sign, starting from 0).
template <class Field, class Vector, class Guard = detail::NoGuard>
std::vector<Vector> integrate_rk_samples(Field&& field, const Vector& x0,
                                         const std::vector<double>& times, double tol,
                                         Guard guard = {}) {
  RkIntegrator<std::decay_t<Field>, Vector, Guard> rk(std::forward<Field>(field), x0, tol,
                                                      std::move(guard));
  std::vector<Vector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(rk.advance_to(t));
  return out;
}

}  // namespace confham
