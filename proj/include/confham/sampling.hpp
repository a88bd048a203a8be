#pragma once

#include <cstdint>
#include <random>

#include "confham/gls.hpp"
#include "confham/kepler.hpp"
#include "confham/moser.hpp"
#include "confham/phase.hpp"

namespace confham {

// Seeded sampler for the verification sweeps. Lengths are in units where the
// sampled |r| lies in [0.5, 2]; energies in units of m k.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  Vec3 unit_vector();
  Vec3 gaussian_vector();
  Vec4 gaussian_vec4();

  // E/(mk) in [-1, -0.1] (elliptic) or [0.1, 1] (hyperbolic), |r| in [0.5, 2].
  // Elliptic points have eccentricity <= 0.9, and |L| >= 0.2 |r||p| on both
  // branches.
  PhasePointE phase_point(Signature sig, const KeplerParams& params);

  // E = 0 exactly (up to roundoff), |r| in [0.5, 2], |L| >= 0.2 |r||p|.
  PhasePointE zero_energy_point(const KeplerParams& params);

  // Random point of T*Q_rho with |rho - h| >= 0.05 rho and W tangent. For
  // zeta = -1 only the sheet h > rho (the image of p > rho, which contains every
  // matched lift) is sampled unless both_sheets is set.
  CotangentQPoint q_point(Signature sig, double rho, bool both_sheets = false);

  TangentE tangent_e();

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace confham
