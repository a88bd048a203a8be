#include "confham/sampling.hpp"

#include <cmath>

#include "confham/error.hpp"

namespace confham {

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Vec3 Sampler::gaussian_vector() {
  std::normal_distribution<double> n(0.0, 1.0);
  const double x = n(rng_), y = n(rng_), z = n(rng_);
  return {x, y, z};
}

Vec4 Sampler::gaussian_vec4() {
  const Vec3 v = gaussian_vector();
  return {v, std::normal_distribution<double>(0.0, 1.0)(rng_)};
}

Vec3 Sampler::unit_vector() {
  for (;;) {
    const Vec3 v = gaussian_vector();
    const double n = norm(v);
    if (n > 1e-3) return v / n;
  }
}

PhasePointE Sampler::phase_point(Signature sig, const KeplerParams& params) {
  const double mk = params.m * params.k;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double rn = uniform(0.5, 2.0);
    double e = 0.0;
    if (sig == Signature::elliptic) {
      // Keep the kinetic energy away from zero.
      const double lo = std::max(-1.0, -0.9 / rn);
      if (lo >= -0.1) continue;
      e = uniform(lo, -0.1) * mk;
    } else {
      e = uniform(0.1, 1.0) * mk;
    }
    const double p2 = 2.0 * params.m * (e + mk / rn);
    if (!(p2 > 0.0)) continue;
    const PhasePointE x{rn * unit_vector(), std::sqrt(p2) * unit_vector()};
    if (norm(cross(x.r, x.p)) < 0.2 * rn * std::sqrt(p2)) continue;
    if (sig == Signature::elliptic && norm(eccentricity_vector(x, params)) > 0.9) continue;
    return x;
  }
  throw Error(ErrorKind::non_convergence, "phase point sampler exhausted its attempts");
}

PhasePointE Sampler::zero_energy_point(const KeplerParams& params) {
  for (;;) {
    const double rn = uniform(0.5, 2.0);
    const double p = std::sqrt(2.0 * params.m * params.m * params.k / rn);
    const PhasePointE x{rn * unit_vector(), p * unit_vector()};
    if (norm(cross(x.r, x.p)) >= 0.2 * rn * p) return x;
  }
}

CotangentQPoint Sampler::q_point(Signature sig, double rho, bool both_sheets) {
  const double z = zeta(sig);
  for (;;) {
    Vec4 om;
    if (sig == Signature::elliptic) {
      Vec4 v = gaussian_vec4();
      const double n = std::sqrt(norm2(v.v3) + v.h * v.h);
      if (n < 1e-3) continue;
      om = (rho / n) * v;
    } else {
      const Vec3 x = uniform(0.0, 3.0 * rho) * unit_vector();
      const double h = std::sqrt(rho * rho + norm2(x));
      om = {x, both_sheets && uniform(0.0, 1.0) < 0.5 ? -h : h};
    }
    if (std::abs(rho - om.h) < 0.05 * rho) continue;
    Vec4 w = gaussian_vec4();
    // metric_dot(OM, OM) = zeta rho^2 on the quadric
    w -= (metric_dot(w, om, sig) / (z * rho * rho)) * om;
    if (metric_dot(w, w, sig) < 1e-2) continue;
    return {om, w, sig, rho};
  }
}

TangentE Sampler::tangent_e() { return {gaussian_vector(), gaussian_vector()}; }

}  // namespace confham
