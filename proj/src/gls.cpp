#include "confham/gls.hpp"

#include <cmath>
#include <string>

#include "confham/error.hpp"

namespace confham {

namespace {

void check_pole(double R, double h) {
  if (std::abs(R - h) < kPoleBand * R)
    throw Error(ErrorKind::north_pole, "point on the fibre over N (h = R)");
}

double euclid4(const Vec4& a) { return std::sqrt(norm2(a.v3) + a.h * a.h); }

// |W| on T*Q_R. On the hyperboloid |W3|^2 - W_h^2 cancels badly once the
// point has been boosted far out; eliminating W_h with the tangency relation
// gives a sum of squares, (R^2 |W3|^2 + |W3 x Om|^2) / h^2.
double w_norm_q(const DelaunayPoint& q, double R) {
  if (q.sig == Signature::elliptic) return w_norm(q.w, q.sig);
  const double h2 = q.om.h * q.om.h;
  const double n2 = (R * R * norm2(q.w.v3) + norm2(cross(q.w.v3, q.om.v3))) / h2;
  if (!(n2 > 0.0)) throw Error(ErrorKind::degenerate, "|W|^2 must be positive");
  return std::sqrt(n2);
}

}  // namespace

void validate(const DelaunayPoint& q, const KeplerParams& params, double tol) {
  const auto res = residuals(q, params);
  const double R2 = params.R * params.R;
  if (std::abs(res.quadric) > tol * R2)
    throw Error(ErrorKind::invalid_argument, "quadric residual " + std::to_string(res.quadric));
  if (std::abs(res.tangency) > tol * std::max(1.0, euclid4(q.om) * euclid4(q.w)))
    throw Error(ErrorKind::invalid_argument, "tangency residual " + std::to_string(res.tangency));
  w_norm(q.w, q.sig);
}

CotangentQPoint scale_lift(const DelaunayPoint& q, double rho, const KeplerParams& params) {
  if (!(rho > 0.0)) throw Error(ErrorKind::invalid_argument, "rho must be positive");
  const double a = rho / params.R;
  return {a * q.om, (1.0 / a) * q.w, q.sig, rho};
}

DelaunayPoint s_inverse(const PhasePointE& x, const KeplerParams& params, Signature sig) {
  const double E = energy(x, params);
  const double z = zeta(sig);
  if (!(z * E < 0.0))
    throw Error(ErrorKind::wrong_branch, "E = " + std::to_string(E) + " does not match zeta = " +
                                             std::to_string(static_cast<int>(z)));
  const double a = params.mu2k();
  const double R = params.R;
  const double rn = norm(x.r);
  const double p2 = norm2(x.p);
  const double rp = dot(x.r, x.p);
  const double rad = z * rn * (2.0 * a - rn * p2);
  if (!(rad > 0.0)) throw Error(ErrorKind::radicand, "zeta r (2 m^2 k - r p^2) <= 0");
  const double sq = std::sqrt(rad);
  DelaunayPoint q;
  q.sig = sig;
  q.om = {(z * R * sq / a) * x.p, R * (rn * p2 - a) / a};
  q.w = {(z / (R * sq)) * (a * x.r - (rn * rp) * x.p), z * rp / R};
  return q;
}

DelaunayPoint s_inverse(const PhasePointE& x, const KeplerParams& params) {
  const auto cls = energy_class(x, params);
  if (!cls) throw Error(ErrorKind::zero_energy, "the glued map is undefined at E = 0");
  return s_inverse(x, params, *cls);
}

PhasePointE s_forward(const DelaunayPoint& q, const KeplerParams& params) {
  const double R = params.R;
  const double h = q.om.h;
  check_pole(R, h);
  const double rho = params.k * params.m * params.m / (R * w_norm_q(q, R));
  return {((R - h) / rho) * q.w.v3 + (q.w.h / rho) * q.om.v3, (rho / (R - h)) * q.om.v3};
}

double delaunay_hamiltonian(const DelaunayPoint& q, const KeplerParams& params) {
  const double n = w_norm_q(q, params.R);
  const double k = params.k, m = params.m, R = params.R;
  return -zeta(q.sig) * k * k * m * m * m / (2.0 * R * R * n * n);
}

double delaunay_hamiltonian(const Vec8& x, Signature sig, const KeplerParams& params) {
  const double n2 = metric_dot(w_part(x), w_part(x), sig);
  if (!(n2 > 0.0)) throw Error(ErrorKind::degenerate, "|W|^2 must be positive");
  const double k = params.k, m = params.m, R = params.R;
  return -zeta(sig) * k * k * m * m * m / (2.0 * R * R * n2);
}

double conformal_factor(const DelaunayPoint& q, const KeplerParams& params) {
  check_pole(params.R, q.om.h);
  return params.R / (q.om.h - params.R);
}

double delaunay_w_norm(const DelaunayPoint& q, const KeplerParams& params) {
  return w_norm_q(q, params.R);
}

double flow_rate(const DelaunayPoint& q, const KeplerParams& params) {
  const double n = w_norm_q(q, params.R);
  const double k = params.k, m = params.m, R = params.R;
  return k * k * m * m * m / (R * R * R * n * n * n);
}

DelaunayPoint delaunay_flow(const DelaunayPoint& q, double s, const KeplerParams& params) {
  const double n = w_norm_q(q, params.R);
  const double R = params.R;
  const double th = flow_rate(q, params) * s;
  const bool ell = q.sig == Signature::elliptic;
  const double c = ell ? std::cos(th) : std::cosh(th);
  const double sn = ell ? std::sin(th) : std::sinh(th);
  const double z = zeta(q.sig);
  return {c * q.om - (z * R / n * sn) * q.w, (n / R * sn) * q.om + c * q.w, q.sig};
}

double gls_flow_time(const PhasePointE& x, const KeplerParams& params) {
  const auto cls = energy_class(x, params);
  if (!cls) throw Error(ErrorKind::zero_energy, "the GLS map is undefined at E = 0");
  return dot(x.p, x.r) / (2.0 * energy(x, params));
}

DelaunayPoint gls_map(const PhasePointE& x, const KeplerParams& params) {
  const double s = gls_flow_time(x, params);
  return delaunay_flow(s_inverse(x, params), s, params);
}

PhasePointE gls_inverse(const DelaunayPoint& q, const KeplerParams& params,
                        GlsInverseInfo* info) {
  const double H = delaunay_hamiltonian(q, params);
  const double R = params.R;
  const double z = zeta(q.sig);
  const double lam = flow_rate(q, params);
  auto F = [&](double s) {
    const DelaunayPoint qs = delaunay_flow(q, -s, params);
    return s - z * R * qs.w.h / (2.0 * H);
  };
  auto dF = [&](double s) { return (R - delaunay_flow(q, -s, params).om.h) / R; };

  double s = 0.0;
  double f = F(s);
  int iterations = 0;
  if (f != 0.0) {
    // Bracket the root; F is monotone in s.
    double lo = -1.0 / lam, hi = 1.0 / lam;
    double flo = F(lo), fhi = F(hi);
    for (int grow = 0; flo * fhi > 0.0; ++grow) {
      if (grow > 60 || !std::isfinite(flo) || !std::isfinite(fhi))
        throw Error(ErrorKind::root_find, "no sign change in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "]");
      lo *= 2.0;
      hi *= 2.0;
      flo = F(lo);
      fhi = F(hi);
    }
    s = std::abs(flo) < std::abs(fhi) ? lo : hi;
    f = s == lo ? flo : fhi;
    const double scale = std::max(1.0, hi - lo);
    for (;; ++iterations) {
      if (iterations > 200)
        throw Error(ErrorKind::root_find, "no convergence in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "], F = " + std::to_string(f));
      if (std::abs(f) <= 1e-15 * scale || hi - lo <= 4e-16 * std::max(1.0, std::abs(s))) break;
      const double d = dF(s);
      double sn = d != 0.0 ? s - f / d : 0.5 * (lo + hi);
      if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
      const double fn = F(sn);
      if ((fn < 0.0) == (flo < 0.0)) {
        lo = sn;
        flo = fn;
      } else {
        hi = sn;
      }
      const bool stalled = std::abs(sn - s) <= 1e-16 * std::max(1.0, std::abs(s));
      s = sn;
      f = fn;
      if (fn == 0.0 || stalled) break;
    }
  }
  if (info) *info = {s, iterations};
  return s_forward(delaunay_flow(q, -s, params), params);
}

GlsExplicit gls_explicit_negative(const PhasePointE& x, const KeplerParams& params,
                                  PhaseMode mode) {
  const double E = energy(x, params);
  if (!(E < 0.0)) throw Error(ErrorKind::wrong_branch, "explicit formulas need E < 0");
  const double a = params.mu2k();
  const double rn = norm(x.r);
  const double p2 = norm2(x.p);
  const double rp = dot(x.r, x.p);
  const double rt = std::sqrt(-2.0 * params.m * E);
  const double phi = mode == PhaseMode::composed ? rt * rp / a
                                                 : rt / (params.m * params.k * rp);
  const double c = std::cos(phi), s = std::sin(phi);
  const double u = rn * p2 / a - 1.0;
  const Vec3 v = x.r / rn - (rp / a) * x.p;
  GlsExplicit g;
  g.xi0 = rt / a * rp * s + u * c;
  g.xi = s * v + (rt / a * rn * c) * x.p;
  g.eta0 = -rp * c + a / rt * u * s;
  g.eta = (-a / rt * c) * v + (rn * s) * x.p;
  return g;
}

ExplicitIdentities explicit_identities(const GlsExplicit& g) {
  return {g.xi0 * g.xi0 + norm2(g.xi) - 1.0, g.xi0 * g.eta0 + dot(g.xi, g.eta)};
}

double calibrate_eta_scale(const PhasePointE& x, const KeplerParams& params) {
  const GlsExplicit g = gls_explicit_negative(x, params);
  const DelaunayPoint q = gls_map(x, params);
  const Vec4 target = params.R * q.w;
  const double num = dot(g.eta, target.v3) + g.eta0 * target.h;
  const double den = norm2(target.v3) + target.h * target.h;
  if (!(den > 0.0)) throw Error(ErrorKind::degenerate, "calibration point has W = 0");
  return num / den;
}

ExplicitComparison compare_explicit(const PhasePointE& x, const KeplerParams& params,
                                    double eta_scale, PhaseMode mode) {
  const GlsExplicit g = gls_explicit_negative(x, params, mode);
  const DelaunayPoint q = gls_map(x, params);
  const double R = params.R;
  const Vec4 xi{g.xi - q.om.v3 / R, g.xi0 - q.om.h / R};
  const Vec4 eta{g.eta - (eta_scale * R) * q.w.v3, g.eta0 - eta_scale * R * q.w.h};
  return {eta_scale, euclid4(xi), euclid4(eta)};
}

}  // namespace confham
