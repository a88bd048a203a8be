#pragma once

#include <optional>
#include <vector>

#include "confham/integrator.hpp"
#include "confham/phase.hpp"
#include "confham/vec.hpp"

namespace confham {

// Physical constants m, k and the regularisation constants R (reference
// quadric scale) and l (inversion ratio of the zero-energy lift).
struct KeplerParams {
  double m = 1.0;
  double k = 1.0;
  double R = 1.0;
  double l = 2.0;

  // l defaults to 2 m^2 k.
  static KeplerParams make(double m, double k, double R, std::optional<double> l = std::nullopt);

  // Throws invalid_argument unless every constant is finite and positive.
  void validate() const;

  double mu2k() const { return m * m * k; }  // m^2 k
};

struct EnergyMomentum {
  double E = 0.0;
  Vec3 L;
  Vec3 eps;
};

struct HodographCircle {
  Vec3 c;
  double radius = 0.0;
};

// Radius below which every Kepler-side evaluation is treated as a collision.
inline constexpr double kCollisionRadius = 1e-8;

// (dr, dp) = (p/m, -mk r/|r|^3).
TangentE kepler_vector_field(const PhasePointE& x, const KeplerParams& params);

double energy(const PhasePointE& x, const KeplerParams& params);
Vec3 angular_momentum(const PhasePointE& x);
Vec3 eccentricity_vector(const PhasePointE& x, const KeplerParams& params);
EnergyMomentum energy_momentum(const PhasePointE& x, const KeplerParams& params);

// Zero band for the energy: |E| <= 1e-12 * scale, where scale is the larger of
// the kinetic and potential terms at the point (or 1 when only E is known).
inline constexpr double kZeroEnergyBand = 1e-12;

// zeta = +1 for E < 0, -1 for E > 0, nullopt inside the zero band.
std::optional<Signature> energy_class(double E, double scale = 1.0);
std::optional<Signature> energy_class(const PhasePointE& x, const KeplerParams& params);

// Momentum-space circle traced by p. Throws degenerate when L = 0.
HodographCircle hodograph(const PhasePointE& x, const KeplerParams& params);

// Kepler_t(x) with the collision guard; tol is the integrator tolerance.
PhasePointE kepler_flow(const PhasePointE& x, double t, const KeplerParams& params,
                        double tol = 1e-11);

// States at the requested times (sorted, same sign) along one integration.
std::vector<PhasePointE> kepler_orbit(const PhasePointE& x, const std::vector<double>& times,
                                      const KeplerParams& params, double tol = 1e-11);

// Period 2 pi sqrt(a^3 / k) with a = -mk / (2E). Throws wrong_branch unless E < 0.
double kepler_period(const PhasePointE& x, const KeplerParams& params);

}  // namespace confham
