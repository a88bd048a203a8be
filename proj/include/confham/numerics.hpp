#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "confham/error.hpp"
#include "confham/phase.hpp"
#include "confham/vec.hpp"

namespace confham {

// Central-difference step. Each coordinate uses step * max(1, |x_i|).
inline constexpr double kFdStep = 1e-5;

// Global sign s in {f,g} = s * sum_i (df/dr_i dg/dp_i - df/dp_i dg/dr_i).
// Fixed so that {Lx, Ly} = -Lz with L = r x p; with this sign the Hamiltonian
// fields of the ω = dp∧dr convention satisfy [X_f, X_g] = X_{f,g}.
inline constexpr double kPoissonSign = -1.0;

// Canonical form d(p·dr) = dp∧dr evaluated on two E-side deltas.
double two_form_e(const TangentE& u, const TangentE& v);

// Canonical form d(W·dOM) of T*Q evaluated on two deltas at (om, w). The
// Liouville form on the quadric is W3·dOμ + ζ W_h dh, so the h-pairing is
// weighted by ζ. Throws ErrorKind::tangency when a delta violates the
// linearised quadric or tangency constraint by more than tangency_tol (scaled
// by the point magnitude).
double two_form_q(const Vec4& om, const Vec4& w, Signature sig, const TangentQ& u,
                  const TangentQ& v, double tangency_tol = 1e-8);

// Residuals of the linearised constraints at (om, w) for a Q-side delta:
// first = <OM, dOM>, second = <dOM, W> + <OM, dW> (ζ metric).
std::pair<double, double> tangency_residuals(const Vec4& om, const Vec4& w, Signature sig,
                                             const TangentQ& u);

// Orthonormal (Euclidean) basis of the 6-dimensional tangent space of
// {<OM,OM> = const, <OM,W> = 0} at (om, w), as the columns of an 8x6 matrix.
Eigen::Matrix<double, 8, 6> tangent_basis_q(const Vec4& om, const Vec4& w, Signature sig);

// Euclidean projection of an ambient delta onto that tangent space.
TangentQ project_tangent_q(const Vec4& om, const Vec4& w, Signature sig, const TangentQ& u);

template <class Derived>
double fd_step_for(const Eigen::MatrixBase<Derived>& x, Eigen::Index i, double step) {
  return step * std::max(1.0, std::abs(x[i]));
}

// Central-difference Jacobian; column i = (map(x + h_i e_i) - map(x - h_i e_i)) / (2 h_i).
template <class Map, class Derived>
Eigen::MatrixXd jacobian_fd(Map&& map, const Eigen::MatrixBase<Derived>& x,
                            double step = kFdStep) {
  using In = typename Derived::PlainObject;
  const In x0 = x;
  Eigen::MatrixXd jac;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double h = fd_step_for(x0, i, step);
    In xp = x0;
    In xm = x0;
    xp[i] += h;
    xm[i] -= h;
    const auto fp = map(xp);
    const auto fm = map(xm);
    if (i == 0) jac.resize(fp.size(), x0.size());
    jac.col(i) = (fp - fm) / (xp[i] - xm[i]);
  }
  return jac;
}

// Fourth-order five-point Jacobian, for maps whose third derivatives swamp
// the central difference (flows through the Delaunay Hamiltonian).
template <class Map, class Derived>
Eigen::MatrixXd jacobian_fd4(Map&& map, const Eigen::MatrixBase<Derived>& x,
                             double step = 2e-4) {
  using In = typename Derived::PlainObject;
  const In x0 = x;
  Eigen::MatrixXd jac;
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double h = fd_step_for(x0, i, step);
    auto at = [&](double c) {
      In xs = x0;
      xs[i] += c * h;
      return map(xs);
    };
    const auto f2 = at(2.0);
    const auto f1 = at(1.0);
    const auto m1 = at(-1.0);
    const auto m2 = at(-2.0);
    if (i == 0) jac.resize(f1.size(), x0.size());
    jac.col(i) = (8.0 * (f1 - m1) - (f2 - m2)) / (12.0 * h);
  }
  return jac;
}

// Central-difference gradient of a scalar function.
template <class Func, class Derived>
typename Derived::PlainObject gradient_fd(Func&& f, const Eigen::MatrixBase<Derived>& x,
                                          double step = kFdStep) {
  using In = typename Derived::PlainObject;
  const In x0 = x;
  In grad(x0.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double h = fd_step_for(x0, i, step);
    In xp = x0;
    In xm = x0;
    xp[i] += h;
    xm[i] -= h;
    grad[i] = (f(xp) - f(xm)) / (xp[i] - xm[i]);
  }
  return grad;
}

// Central-difference derivative of map along direction d.
template <class Map, class Derived, class DerivedD>
auto directional_fd(Map&& map, const Eigen::MatrixBase<Derived>& x,
                    const Eigen::MatrixBase<DerivedD>& d, double step = kFdStep) {
  using In = typename Derived::PlainObject;
  const double dn = d.template lpNorm<Eigen::Infinity>();
  using Out = std::decay_t<decltype(map(std::declval<In>()))>;
  if (dn == 0.0) return Out(Out::Zero(map(In(x)).size()));
  const double h = step * std::max(1.0, x.template lpNorm<Eigen::Infinity>()) / dn;
  const In xp = x + h * d;
  const In xm = x - h * d;
  return Out((map(xp) - map(xm)) / (2.0 * h));
}

using ScalarFieldE = std::function<double(const PhasePointE&)>;

// {f, g}(x) with the library sign kPoissonSign, derivatives by central differences.
double poisson_bracket_fd(const ScalarFieldE& f, const ScalarFieldE& g, const PhasePointE& x,
                          double step = kFdStep);

// Hamiltonian field of f for dp∧dr with i(X_f)ω = -df: (dr, dp) = (∂f/∂p, -∂f/∂r).
TangentE hamiltonian_field_e(const ScalarFieldE& f, const PhasePointE& x, double step = kFdStep);

using VectorFieldE = std::function<TangentE(const PhasePointE&)>;

// Lie bracket [X, Y](x) = DY·X - DX·Y by central differences.
TangentE lie_bracket_fd(const VectorFieldE& X, const VectorFieldE& Y, const PhasePointE& x,
                        double step = kFdStep);

// Hamiltonian field of an ambient scalar H restricted to T*Q, i.e. the tangent
// vector V with two_form_q(V, u) = -dH(u) for every tangent u. Solved in the
// basis of tangent_basis_q; dH by central differences along each basis vector.
TangentQ hamiltonian_field_q(const std::function<double(const Vec8&)>& H, const Vec4& om,
                             const Vec4& w, Signature sig, double step = kFdStep);

}  // namespace confham
