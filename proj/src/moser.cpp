#include "confham/moser.hpp"

#include <cmath>
#include <string>

#include "confham/error.hpp"

namespace confham {

namespace {

void check_pole(double rho, double h) {
  if (std::abs(rho - h) < kPoleBand * rho)
    throw Error(ErrorKind::north_pole, "point on the fibre over N (h = rho)");
}

// (r, p) <-> (OM, W) inversion, shared by both directions.
std::pair<Vec3, Vec3> invert(const Vec3& a, const Vec3& b, double l) {
  const double b2 = norm2(b);
  if (!(b2 > 0.0)) throw Error(ErrorKind::zero_momentum, "inversion needs a nonzero momentum");
  const double rp = dot(a, b);
  return {(l / b2) * b, (b2 / l) * a - (2.0 * rp / l) * b};
}

}  // namespace

ConstraintResiduals residuals(const Vec4& om, const Vec4& w, Signature sig, double rho) {
  return {om.h * om.h + zeta(sig) * norm2(om.v3) - rho * rho, metric_dot(om, w, sig)};
}

double w_norm(const Vec4& w, Signature sig) {
  const double n2 = metric_dot(w, w, sig);
  if (!(n2 > 0.0)) throw Error(ErrorKind::degenerate, "|W|^2 must be positive");
  return std::sqrt(n2);
}

double rho_for_energy(double E, const KeplerParams& params) {
  if (E == 0.0 || !std::isfinite(E))
    throw Error(ErrorKind::zero_energy, "rho is undefined at E = 0; use the inversion lift");
  return std::sqrt(2.0 * params.m * std::abs(E));
}

CotangentQPoint moser_lift_inv(const PhasePointE& x, double rho, Signature sig) {
  if (!(rho > 0.0)) throw Error(ErrorKind::invalid_argument, "rho must be positive");
  const double z = zeta(sig);
  const double p2 = norm2(x.p);
  const double rho2 = rho * rho;
  const double den = rho2 + z * p2;
  if (std::abs(den) <= 1e-14 * (rho2 + p2))
    throw Error(ErrorKind::singular_momentum, "rho^2 + zeta p^2 = 0");
  const double rp = dot(x.r, x.p);
  CotangentQPoint q;
  q.sig = sig;
  q.rho = rho;
  q.om = {(2.0 * rho2 / den) * x.p, rho * (p2 - z * rho2) / (p2 + z * rho2)};
  q.w = {(den / (2.0 * rho2)) * x.r - (z * rp / rho2) * x.p, z * rp / rho};
  return q;
}

PhasePointE moser_lift(const CotangentQPoint& q) {
  const double rho = q.rho;
  const double h = q.om.h;
  check_pole(rho, h);
  const double d = rho - h;
  return {(d / rho) * q.w.v3 + (q.w.h / rho) * q.om.v3, (rho / d) * q.om.v3};
}

double moser_hamiltonian(const CotangentQPoint& q, const KeplerParams& params) {
  const double rho = q.rho;
  const double h = q.om.h;
  check_pole(rho, h);
  const double z = zeta(q.sig);
  const double wn = w_norm(q.w, q.sig);
  const double m = params.m;
  // Same as -zeta rho^2/2m + zeta rho^3 (|W| - km^2/rho^2) / (m (rho - h) |W|)
  // wherever zeta (rho - h) > 0. Writing the potential as -mk/r with
  // r = |rho - h| |W| / rho keeps it valid on the lower sheet h < -rho of the
  // hyperboloid (the image of p < rho), where the displayed form flips sign.
  return -z * rho * rho / (2.0 * m) + z * rho * rho * rho / (m * (rho - h)) -
         params.m * params.k * rho / (std::abs(rho - h) * wn);
}

CotangentEPoint parabolic_lift(const PhasePointE& x, double l) {
  auto [om, w] = invert(x.r, x.p, l);
  return {om, w};
}

PhasePointE parabolic_lift(const CotangentEPoint& q, double l) {
  // The involution read backwards: OM plays the role of p and W of r.
  auto [p, r] = invert(q.w, q.om, l);
  return {r, p};
}

double parabolic_hamiltonian(const CotangentEPoint& q, const KeplerParams& params) {
  const double wn = norm(q.w);
  const double om2 = norm2(q.om);
  if (!(wn > 0.0) || !(om2 > 0.0))
    throw Error(ErrorKind::degenerate, "parabolic Hamiltonian needs |W| > 0 and |OM| > 0");
  const double l = params.l;
  return l * l * (wn - 2.0 * params.mu2k() / l) / (2.0 * params.m * wn * om2);
}

}  // namespace confham
