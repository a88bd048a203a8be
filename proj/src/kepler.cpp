#include "confham/kepler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "confham/error.hpp"

namespace confham {

namespace {

double checked_radius(const Vec3& r) {
  const double rn = norm(r);
  if (!(rn > kCollisionRadius)) throw Error(ErrorKind::collision, "|r| = " + std::to_string(rn));
  return rn;
}

Vec6 field_flat(const Vec6& v, const KeplerParams& P) {
  const double rx = v[0], ry = v[1], rz = v[2];
  const double rn = std::sqrt(rx * rx + ry * ry + rz * rz);
  const double f = -P.m * P.k / (rn * rn * rn);
  Vec6 out;
  out << v[3] / P.m, v[4] / P.m, v[5] / P.m, f * rx, f * ry, f * rz;
  return out;
}

struct CollisionGuard {
  void operator()(const Vec6& v) const {
    if (v.head<3>().norm() < kCollisionRadius)
      throw Error(ErrorKind::collision, "orbit reached |r| < 1e-8");
  }
};

template <class Run>
auto with_collision_mapping(Run&& run) {
  try {
    return run();
  } catch (const Error& e) {
    // A collapsing step on a Kepler orbit means the orbit is heading into O.
    if (e.kind() == ErrorKind::non_convergence)
      throw Error(ErrorKind::collision, std::string("integration stalled near r = 0 (") +
                                            e.what() + ")");
    throw;
  }
}

}  // namespace

KeplerParams KeplerParams::make(double m, double k, double R, std::optional<double> l) {
  KeplerParams p{m, k, R, l.value_or(2.0 * m * m * k)};
  p.validate();
  return p;
}

void KeplerParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!ok(m) || !ok(k) || !ok(R) || !ok(l))
    throw Error(ErrorKind::invalid_argument, "m, k, R and l must be finite and positive");
}

TangentE kepler_vector_field(const PhasePointE& x, const KeplerParams& params) {
  const double rn = checked_radius(x.r);
  return {x.p / params.m, (-params.m * params.k / (rn * rn * rn)) * x.r};
}

double energy(const PhasePointE& x, const KeplerParams& params) {
  const double rn = checked_radius(x.r);
  return norm2(x.p) / (2.0 * params.m) - params.m * params.k / rn;
}

Vec3 angular_momentum(const PhasePointE& x) { return cross(x.r, x.p); }

Vec3 eccentricity_vector(const PhasePointE& x, const KeplerParams& params) {
  const double rn = checked_radius(x.r);
  return cross(x.p, cross(x.r, x.p)) / params.mu2k() - x.r / rn;
}

EnergyMomentum energy_momentum(const PhasePointE& x, const KeplerParams& params) {
  return {energy(x, params), angular_momentum(x), eccentricity_vector(x, params)};
}

std::optional<Signature> energy_class(double E, double scale) {
  if (std::abs(E) <= kZeroEnergyBand * scale) return std::nullopt;
  return E < 0.0 ? Signature::elliptic : Signature::hyperbolic;
}

std::optional<Signature> energy_class(const PhasePointE& x, const KeplerParams& params) {
  const double rn = checked_radius(x.r);
  const double kin = norm2(x.p) / (2.0 * params.m);
  const double pot = params.m * params.k / rn;
  return energy_class(kin - pot, std::max(kin, pot));
}

HodographCircle hodograph(const PhasePointE& x, const KeplerParams& params) {
  const double rn = checked_radius(x.r);
  const Vec3 L = angular_momentum(x);
  const double l2 = norm2(L);
  if (!(l2 > 1e-28 * norm2(x.r) * std::max(1.0, norm2(x.p))))
    throw Error(ErrorKind::degenerate, "L = 0, the hodograph is a half-line");
  const double mk = params.mu2k();
  return {x.p - (mk / (l2 * rn)) * cross(L, x.r), mk / std::sqrt(l2)};
}

PhasePointE kepler_flow(const PhasePointE& x, double t, const KeplerParams& params, double tol) {
  checked_radius(x.r);
  return with_collision_mapping([&] {
    auto f = [P = params](const Vec6& v) { return field_flat(v, P); };
    return phase_point_from(integrate_rk(f, to_vector(x), t, tol, CollisionGuard{}));
  });
}

std::vector<PhasePointE> kepler_orbit(const PhasePointE& x, const std::vector<double>& times,
                                      const KeplerParams& params, double tol) {
  checked_radius(x.r);
  return with_collision_mapping([&] {
    auto f = [P = params](const Vec6& v) { return field_flat(v, P); };
    const auto states = integrate_rk_samples(f, to_vector(x), times, tol, CollisionGuard{});
    std::vector<PhasePointE> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(phase_point_from(s));
    return out;
  });
}

double kepler_period(const PhasePointE& x, const KeplerParams& params) {
  const double E = energy(x, params);
  if (!(E < 0.0)) throw Error(ErrorKind::wrong_branch, "period requested for E >= 0");
  const double a = -params.m * params.k / (2.0 * E);
  return 2.0 * std::numbers::pi * std::sqrt(a * a * a / params.k);
}

}  // namespace confham
