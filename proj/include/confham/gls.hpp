#pragma once

#include <string>

#include "confham/kepler.hpp"
#include "confham/moser.hpp"
#include "confham/phase.hpp"
#include "confham/vec.hpp"

namespace confham {

// A point of T*Q with Q = Q_R fixed by KeplerParams::R.
struct DelaunayPoint {
  Vec4 om;
  Vec4 w;
  Signature sig = Signature::elliptic;
};

inline ConstraintResiduals residuals(const DelaunayPoint& q, const KeplerParams& params) {
  return residuals(q.om, q.w, q.sig, params.R);
}

// Throws invalid_argument when either constraint residual exceeds tol (relative
// to R^2 for the quadric).
void validate(const DelaunayPoint& q, const KeplerParams& params, double tol = 1e-10);

// (OM, W) at scale R -> ((rho/R) OM, (R/rho) W) at scale rho.
CotangentQPoint scale_lift(const DelaunayPoint& q, double rho, const KeplerParams& params);

// The glued map S^{-1}. Throws wrong_branch when zeta E >= 0 and radicand when
// zeta r (2 m^2 k - r p^2) <= 0.
DelaunayPoint s_inverse(const PhasePointE& x, const KeplerParams& params, Signature sig);
// Picks the branch from the sign of E; throws zero_energy inside the zero band.
DelaunayPoint s_inverse(const PhasePointE& x, const KeplerParams& params);

// rho = k m^2 / (R |W|), p = rho Om / (R - h), r = (R - h) W3 / rho + W_h Om / rho.
PhasePointE s_forward(const DelaunayPoint& q, const KeplerParams& params);

// |W| on the constraint manifold. For zeta = -1 it is rewritten through the
// tangency condition, which avoids cancellation far out on the hyperboloid.
double delaunay_w_norm(const DelaunayPoint& q, const KeplerParams& params);

// H = -zeta k^2 m^3 / (2 R^2 |W|^2).
double delaunay_hamiltonian(const DelaunayPoint& q, const KeplerParams& params);
// Ambient form of H on the flat Q-side layout, for finite differences.
double delaunay_hamiltonian(const Vec8& x, Signature sig, const KeplerParams& params);

// g = R / (h - R): the Kepler field pushed through S^{-1} is g X_H.
double conformal_factor(const DelaunayPoint& q, const KeplerParams& params);

// lambda = k^2 m^3 / (R^3 |W|^3).
double flow_rate(const DelaunayPoint& q, const KeplerParams& params);

// Closed-form flow of -X_H (see README for the orientation):
//   OM(s) = C OM - zeta (R/|W|) S W,  W(s) = (|W|/R) S OM + C W
// with (C, S) = (cos, sin)(lambda s) for zeta = 1 and (cosh, sinh) for zeta = -1.
DelaunayPoint delaunay_flow(const DelaunayPoint& q, double s, const KeplerParams& params);

// Flow time that moves S^{-1}(x) to the GLS image: s = (p.r) / (2E).
double gls_flow_time(const PhasePointE& x, const KeplerParams& params);

DelaunayPoint gls_map(const PhasePointE& x, const KeplerParams& params);

struct GlsInverseInfo {
  double s = 0.0;  // flow time removed
  int iterations = 0;
};

// Inverse of gls_map. Solves F(s) = s - zeta R W_h(s) / (2H) = 0 with
// q_s = delaunay_flow(q, -s); F is strictly increasing, so the root is unique.
PhasePointE gls_inverse(const DelaunayPoint& q, const KeplerParams& params,
                        GlsInverseInfo* info = nullptr);

// The explicit negative-energy formulas in (xi0, xi, eta0, eta) form, with
// the phase phi = sqrt(-2mE) (r.p) / (m^2 k).
struct GlsExplicit {
  double xi0 = 0.0;
  Vec3 xi;
  double eta0 = 0.0;
  Vec3 eta;
};

enum class PhaseMode {
  composed,  // sqrt(-2mE) (r.p) / (m^2 k)
  printed,   // sqrt(-2mE) / (mk (r.p)), diagnostics only
};

GlsExplicit gls_explicit_negative(const PhasePointE& x, const KeplerParams& params,
                                  PhaseMode mode = PhaseMode::composed);

// xi0^2 + |xi|^2 - 1 and xi0 eta0 + xi.eta.
struct ExplicitIdentities {
  double sphere = 0.0;
  double orthogonality = 0.0;
};
ExplicitIdentities explicit_identities(const GlsExplicit& g);

// Comparison of the explicit formulas with gls_map through the dictionary
// (xi0, xi) <-> (h, Om) / R and (eta0, eta) <-> scale * R (W_h, W3). The
// scale is fitted by least squares at a calibration point.
struct ExplicitComparison {
  double eta_scale = 0.0;
  double xi_residual = 0.0;
  double eta_residual = 0.0;
};

double calibrate_eta_scale(const PhasePointE& x, const KeplerParams& params);
ExplicitComparison compare_explicit(const PhasePointE& x, const KeplerParams& params,
                                    double eta_scale, PhaseMode mode = PhaseMode::composed);

}  // namespace confham
