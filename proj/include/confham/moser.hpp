#pragma once

#include "confham/kepler.hpp"
#include "confham/phase.hpp"
#include "confham/vec.hpp"

namespace confham {

// A point of T*Q_rho, Q_rho = {h^2 + zeta |Om|^2 = rho^2}, embedded in 4-space.
struct CotangentQPoint {
  Vec4 om;
  Vec4 w;
  Signature sig = Signature::elliptic;
  double rho = 1.0;
};

// Zero-energy branch: base point and covector in 3-space.
struct CotangentEPoint {
  Vec3 om;
  Vec3 w;
};

struct ConstraintResiduals {
  double quadric = 0.0;   // h^2 + zeta |Om|^2 - rho^2
  double tangency = 0.0;  // W3.Om + zeta W_h h
};

ConstraintResiduals residuals(const Vec4& om, const Vec4& w, Signature sig, double rho);
inline ConstraintResiduals residuals(const CotangentQPoint& q) {
  return residuals(q.om, q.w, q.sig, q.rho);
}

// sqrt(W3^2 + zeta W_h^2). Throws degenerate unless the squared norm is positive.
double w_norm(const Vec4& w, Signature sig);

// rho = sqrt(2 m |E|); throws zero_energy for E = 0.
double rho_for_energy(double E, const KeplerParams& params);

// Guard band around the fibre over the pole N.
inline constexpr double kPoleBand = 1e-12;

CotangentQPoint moser_lift_inv(const PhasePointE& x, double rho, Signature sig);
PhasePointE moser_lift(const CotangentQPoint& q);
double moser_hamiltonian(const CotangentQPoint& q, const KeplerParams& params);

// The inversion of ratio l: (r, p) -> (OM, W) = (l p / p^2, p^2 r / l - 2 (r.p) p / l).
// It is an involution, so the same map serves both directions.
CotangentEPoint parabolic_lift(const PhasePointE& x, double l);
PhasePointE parabolic_lift(const CotangentEPoint& q, double l);
double parabolic_hamiltonian(const CotangentEPoint& q, const KeplerParams& params);

}  // namespace confham
