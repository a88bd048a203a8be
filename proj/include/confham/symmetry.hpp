#pragma once

#include <array>
#include <optional>
#include <string>

#include "confham/gls.hpp"
#include "confham/kepler.hpp"
#include "confham/moser.hpp"
#include "confham/numerics.hpp"
#include "confham/phase.hpp"

namespace confham {

struct MomentumPair {
  Vec3 K1;
  Vec3 K2;
};

// (e, u1, u2): a point of the algebroid R x E x E over the energy line.
struct AlgebroidElement {
  double e = 0.0;
  Vec3 u1;
  Vec3 u2;
};

// K1 = Om x W3, K2 = zeta (h W3 - W_h Om).
MomentumPair momentum_K(const Vec4& om, const Vec4& w, Signature sig);
inline MomentumPair momentum_K(const CotangentQPoint& q) { return momentum_K(q.om, q.w, q.sig); }
inline MomentumPair momentum_K(const DelaunayPoint& q) { return momentum_K(q.om, q.w, q.sig); }
// Zero-energy branch: K1 = OM x W, K2 = W.
MomentumPair momentum_K(const CotangentEPoint& q);

// (p x r, eps).
MomentumPair momentum_J(const PhasePointE& x, const KeplerParams& params);

struct IntertwineResidual {
  double K1 = 0.0;  // |K1(gls(x)) - p x r|
  double K2 = 0.0;  // |K2(gls(x)) - (m^2 k / rho) eps|
};
IntertwineResidual intertwine_check(const PhasePointE& x, const KeplerParams& params);

// [(u1,u2),(v1,v2)]_e = (-u1 x v1 + (2e/(m^3 k^2)) u2 x v2, -u1 x v2 - u2 x v1).
// Throws fibre_mismatch when a.e != b.e.
AlgebroidElement algebroid_bracket(const AlgebroidElement& a, const AlgebroidElement& b,
                                   const KeplerParams& params);

// <(L, eps)(x), (u1, u2)>.
double pairing(const PhasePointE& x, const Vec3& u1, const Vec3& u2, const KeplerParams& params);

struct PoissonTableEntry {
  std::string name;  // e.g. "{Lx,Ly}"
  double fd = 0.0;
  double expected = 0.0;
  double residual() const { return std::abs(fd - expected); }
};

// The 15 brackets among the components of L and eps, finite differences
// against the closed-form right-hand sides at the same point.
std::array<PoissonTableEntry, 15> poisson_table_check(const PhasePointE& x,
                                                      const KeplerParams& params,
                                                      double step = kFdStep);

struct ActionBracketResult {
  // |[X_a, X_b](x) - X_{[a,b]_E(x)}(x)|, fields of x -> <J(x), s_{E(x)}>.
  double residual = 0.0;
  // The same with [a,b] frozen at the fibre value e, i.e. the field of
  // x -> <J(x), [a,b]_e> (diagnostic: differs by (w.L) 2/(m^3 k^2) X_E).
  double frozen_residual = 0.0;
};

// Throws fibre_mismatch unless a.e = b.e = E(x) within 1e-9 relative.
ActionBracketResult action_bracket_check(const AlgebroidElement& a, const AlgebroidElement& b,
                                         const PhasePointE& x, const KeplerParams& params,
                                         double outer_step = 1e-4, double inner_step = kFdStep);

}  // namespace confham
