#pragma once

#include <gtest/gtest.h>

#include <cmath>

#include "confham/kepler.hpp"
#include "confham/vec.hpp"

namespace confham::testing {

// Worked points, m = k = R = 1.
inline const PhasePointE kCircular{{1, 0, 0}, {0, 1, 0}};
inline const PhasePointE kElliptic{{2, 0, 0}, {0, 0.6, 0}};
inline const PhasePointE kHyperbolic{{1, 0, 0}, {0, 2, 0}};
inline const PhasePointE kParabolic{{2, 0, 0}, {0, 1, 0}};

inline void expect_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

inline void expect_near(const Vec4& a, const Vec4& b, double tol) {
  expect_near(a.v3, b.v3, tol);
  EXPECT_NEAR(a.h, b.h, tol);
}

inline double at(const Vec3& v, int i) { return i == 0 ? v.x : i == 1 ? v.y : v.z; }

inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

inline double distance(const PhasePointE& a, const PhasePointE& b) {
  return std::max(max_abs(a.r - b.r), max_abs(a.p - b.p));
}

}  // namespace confham::testing
