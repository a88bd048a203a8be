#pragma once

#include <Eigen/Dense>

#include "confham/vec.hpp"

namespace confham {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

// A point (r, p) of T*(E \ {O}).
struct PhasePointE {
  Vec3 r;
  Vec3 p;
};

// Tangent vector at an E-side point.
struct TangentE {
  Vec3 dr;
  Vec3 dp;
};

// Tangent vector at a Q-side point (OM, W) in the ambient 8-space.
struct TangentQ {
  Vec4 dom;
  Vec4 dw;
};

// Flat layouts used by the finite-difference machinery:
//   E-side (rx, ry, rz, px, py, pz)
//   Q-side (OMx, OMy, OMz, OMh, Wx, Wy, Wz, Wh)
inline Vec6 to_vector(const PhasePointE& x) {
  Vec6 v;
  v << x.r.x, x.r.y, x.r.z, x.p.x, x.p.y, x.p.z;
  return v;
}
inline PhasePointE phase_point_from(const Vec6& v) {
  return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}
inline Vec6 to_vector(const TangentE& u) {
  Vec6 v;
  v << u.dr.x, u.dr.y, u.dr.z, u.dp.x, u.dp.y, u.dp.z;
  return v;
}
inline TangentE tangent_e_from(const Vec6& v) {
  return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

inline Vec8 to_vector(const Vec4& om, const Vec4& w) {
  Vec8 v;
  v << om.v3.x, om.v3.y, om.v3.z, om.h, w.v3.x, w.v3.y, w.v3.z, w.h;
  return v;
}
inline Vec8 to_vector(const TangentQ& u) { return to_vector(u.dom, u.dw); }
inline Vec4 om_part(const Vec8& v) { return {{v[0], v[1], v[2]}, v[3]}; }
inline Vec4 w_part(const Vec8& v) { return {{v[4], v[5], v[6]}, v[7]}; }
inline TangentQ tangent_q_from(const Vec8& v) { return {om_part(v), w_part(v)}; }

}  // namespace confham
