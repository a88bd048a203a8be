#include "confham/symmetry.hpp"

#include <cmath>
#include <string>

#include "confham/error.hpp"
#include "confham/numerics.hpp"

namespace confham {

namespace {

double coord(const Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

// Levi-Civita symbol contracted with a vector: sum_k eps_ijk v_k.
double levi(int i, int j, const Vec3& v) {
  if (i == j) return 0.0;
  const int k = 3 - i - j;
  const double sgn = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
  return sgn * coord(v, k);
}

void check_fibre(double a, double b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::fibre_mismatch, std::string(what) + ": e = " + std::to_string(a) +
                                               " vs " + std::to_string(b));
}

}  // namespace

MomentumPair momentum_K(const Vec4& om, const Vec4& w, Signature sig) {
  return {cross(om.v3, w.v3), zeta(sig) * (om.h * w.v3 - w.h * om.v3)};
}

MomentumPair momentum_K(const CotangentEPoint& q) { return {cross(q.om, q.w), q.w}; }

MomentumPair momentum_J(const PhasePointE& x, const KeplerParams& params) {
  return {cross(x.p, x.r), eccentricity_vector(x, params)};
}

IntertwineResidual intertwine_check(const PhasePointE& x, const KeplerParams& params) {
  const DelaunayPoint q = gls_map(x, params);
  const MomentumPair K = momentum_K(q);
  const MomentumPair J = momentum_J(x, params);
  const double rho = rho_for_energy(energy(x, params), params);
  return {norm(K.K1 - J.K1), norm(K.K2 - (params.mu2k() / rho) * J.K2)};
}

AlgebroidElement algebroid_bracket(const AlgebroidElement& a, const AlgebroidElement& b,
                                   const KeplerParams& params) {
  check_fibre(a.e, b.e, "algebroid bracket");
  const double c = 2.0 * a.e / (params.m * params.m * params.m * params.k * params.k);
  return {a.e, c * cross(a.u2, b.u2) - cross(a.u1, b.u1), -(cross(a.u1, b.u2) + cross(a.u2, b.u1))};
}

double pairing(const PhasePointE& x, const Vec3& u1, const Vec3& u2, const KeplerParams& params) {
  return dot(angular_momentum(x), u1) + dot(eccentricity_vector(x, params), u2);
}

std::array<PoissonTableEntry, 15> poisson_table_check(const PhasePointE& x,
                                                      const KeplerParams& params, double step) {
  static const char* names[6] = {"Lx", "Ly", "Lz", "ex", "ey", "ez"};
  const EnergyMomentum J = energy_momentum(x, params);
  const double c = 2.0 * J.E / (params.m * params.m * params.m * params.k * params.k);
  auto component = [&params](int idx) -> ScalarFieldE {
    return [idx, params](const PhasePointE& y) {
      return idx < 3 ? coord(angular_momentum(y), idx)
                     : coord(eccentricity_vector(y, params), idx - 3);
    };
  };

  std::array<PoissonTableEntry, 15> table;
  std::size_t n = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      double expected = 0.0;
      if (a < 3 && b < 3) expected = -levi(a, b, J.L);
      else if (a < 3) expected = -levi(a, b - 3, J.eps);
      else expected = c * levi(a - 3, b - 3, J.L);
      auto& entry = table[n++];
      entry.name = std::string("{") + names[a] + "," + names[b] + "}";
      entry.fd = poisson_bracket_fd(component(a), component(b), x, step);
      entry.expected = expected;
    }
  }
  return table;
}

ActionBracketResult action_bracket_check(const AlgebroidElement& a, const AlgebroidElement& b,
                                         const PhasePointE& x, const KeplerParams& params,
                                         double outer_step, double inner_step) {
  check_fibre(a.e, b.e, "action bracket");
  const double E = energy(x, params);
  if (std::abs(a.e - E) > 1e-9 * std::max(1.0, std::abs(E)))
    throw Error(ErrorKind::fibre_mismatch, "section fibre e = " + std::to_string(a.e) +
                                               " off the energy level E = " + std::to_string(E));

  auto field_of = [&](auto hamiltonian) -> VectorFieldE {
    return [hamiltonian, inner_step](const PhasePointE& y) {
      return hamiltonian_field_e(hamiltonian, y, inner_step);
    };
  };
  auto constant_section = [&params](Vec3 u1, Vec3 u2) -> ScalarFieldE {
    return [=](const PhasePointE& y) { return pairing(y, u1, u2, params); };
  };

  const VectorFieldE Xa = field_of(constant_section(a.u1, a.u2));
  const VectorFieldE Xb = field_of(constant_section(b.u1, b.u2));
  const TangentE lhs = lie_bracket_fd(Xa, Xb, x, outer_step);

  // The bracket section e -> [a, b]_e evaluated on the level of each point.
  const ScalarFieldE section = [a, b, params](const PhasePointE& y) {
    AlgebroidElement ay = a, by = b;
    ay.e = by.e = energy(y, params);
    const AlgebroidElement c = algebroid_bracket(ay, by, params);
    return pairing(y, c.u1, c.u2, params);
  };
  const AlgebroidElement frozen = algebroid_bracket(a, b, params);

  const TangentE rhs = hamiltonian_field_e(section, x, inner_step);
  const TangentE rhs_frozen =
      hamiltonian_field_e(constant_section(frozen.u1, frozen.u2), x, inner_step);
  return {(to_vector(lhs) - to_vector(rhs)).norm(), (to_vector(lhs) - to_vector(rhs_frozen)).norm()};
}

}  // namespace confham
