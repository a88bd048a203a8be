#include "confham/numerics.hpp"

#include <cmath>
#include <cstdio>

namespace confham {

double two_form_e(const TangentE& u, const TangentE& v) {
  return dot(u.dp, v.dr) - dot(v.dp, u.dr);
}

std::pair<double, double> tangency_residuals(const Vec4& om, const Vec4& w, Signature sig,
                                             const TangentQ& u) {
  return {metric_dot(om, u.dom, sig), metric_dot(u.dom, w, sig) + metric_dot(om, u.dw, sig)};
}

namespace {

double euclid(const Vec4& a) { return std::sqrt(norm2(a.v3) + a.h * a.h); }

void check_tangent(const Vec4& om, const Vec4& w, Signature sig, const TangentQ& u, double tol) {
  const auto [c1, c2] = tangency_residuals(om, w, sig, u);
  const double s1 = std::max(1.0, euclid(om) * euclid(u.dom));
  const double s2 = std::max(1.0, euclid(w) * euclid(u.dom) + euclid(om) * euclid(u.dw));
  if (std::abs(c1) > tol * s1 || std::abs(c2) > tol * s2) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "delta not tangent to T*Q (residuals %.3e / %.3e, %.3e / %.3e)",
                  c1, s1, c2, s2);
    throw Error(ErrorKind::tangency, buf);
  }
}

}  // namespace

double two_form_q(const Vec4& om, const Vec4& w, Signature sig, const TangentQ& u,
                  const TangentQ& v, double tangency_tol) {
  check_tangent(om, w, sig, u, tangency_tol);
  check_tangent(om, w, sig, v, tangency_tol);
  // dw_a ∧ dOM_a with covector components (W3, ζ W_h)
  return metric_dot(u.dw, v.dom, sig) - metric_dot(v.dw, u.dom, sig);
}

Eigen::Matrix<double, 8, 6> tangent_basis_q(const Vec4& om, const Vec4& w, Signature sig) {
  const double z = zeta(sig);
  Eigen::Matrix<double, 2, 8> grad = Eigen::Matrix<double, 2, 8>::Zero();
  // d<OM,OM> and d<OM,W> in ambient Euclidean coordinates
  grad.row(0) << 2 * om.v3.x, 2 * om.v3.y, 2 * om.v3.z, 2 * z * om.h, 0, 0, 0, 0;
  grad.row(1) << w.v3.x, w.v3.y, w.v3.z, z * w.h, om.v3.x, om.v3.y, om.v3.z, z * om.h;
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 8>> svd(grad, Eigen::ComputeFullV);
  return svd.matrixV().rightCols<6>();
}

TangentQ project_tangent_q(const Vec4& om, const Vec4& w, Signature sig, const TangentQ& u) {
  const auto basis = tangent_basis_q(om, w, sig);
  const Vec8 v = to_vector(u);
  return tangent_q_from(basis * (basis.transpose() * v));
}

double poisson_bracket_fd(const ScalarFieldE& f, const ScalarFieldE& g, const PhasePointE& x,
                          double step) {
  auto wrap = [](const ScalarFieldE& fn) {
    return [&fn](const Vec6& v) { return fn(phase_point_from(v)); };
  };
  const Vec6 x0 = to_vector(x);
  const Vec6 df = gradient_fd(wrap(f), x0, step);
  const Vec6 dg = gradient_fd(wrap(g), x0, step);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += df[i] * dg[i + 3] - df[i + 3] * dg[i];
  return kPoissonSign * sum;
}

TangentE hamiltonian_field_e(const ScalarFieldE& f, const PhasePointE& x, double step) {
  const Vec6 df =
      gradient_fd([&f](const Vec6& v) { return f(phase_point_from(v)); }, to_vector(x), step);
  return {{df[3], df[4], df[5]}, {-df[0], -df[1], -df[2]}};
}

TangentE lie_bracket_fd(const VectorFieldE& X, const VectorFieldE& Y, const PhasePointE& x,
                        double step) {
  auto flat = [](const VectorFieldE& F) {
    return [&F](const Vec6& v) -> Vec6 { return to_vector(F(phase_point_from(v))); };
  };
  const Vec6 x0 = to_vector(x);
  const Vec6 xv = to_vector(X(x));
  const Vec6 yv = to_vector(Y(x));
  const Vec6 dy_x = directional_fd(flat(Y), x0, xv, step);
  const Vec6 dx_y = directional_fd(flat(X), x0, yv, step);
  return tangent_e_from(dy_x - dx_y);
}

TangentQ hamiltonian_field_q(const std::function<double(const Vec8&)>& H, const Vec4& om,
                             const Vec4& w, Signature sig, double step) {
  const auto basis = tangent_basis_q(om, w, sig);
  const Vec8 x0 = to_vector(om, w);
  Eigen::Matrix<double, 6, 6> omega;
  Eigen::Matrix<double, 6, 1> dh;
  for (int i = 0; i < 6; ++i) {
    const TangentQ ui = tangent_q_from(basis.col(i));
    for (int j = 0; j < 6; ++j) {
      const TangentQ uj = tangent_q_from(basis.col(j));
      omega(i, j) = metric_dot(ui.dw, uj.dom, sig) - metric_dot(uj.dw, ui.dom, sig);
    }
    const Vec8 d = basis.col(i);
    const double h = step * std::max(1.0, x0.lpNorm<Eigen::Infinity>());
    dh[i] = (H(x0 + h * d) - H(x0 - h * d)) / (2.0 * h);
  }
  // sum_i c_i omega(b_i, b_j) = -dH(b_j)
  const Eigen::Matrix<double, 6, 1> c = omega.transpose().fullPivLu().solve(-dh);
  return tangent_q_from(basis * c);
}

}  // namespace confham
