#pragma once

#include <cmath>

namespace confham {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// A vector of the 4-space F = E x R e_h, split as spatial part + e_h component.
struct Vec4 {
  Vec3 v3;
  double h = 0.0;

  constexpr Vec4& operator+=(const Vec4& o) { v3 += o.v3; h += o.h; return *this; }
  constexpr Vec4& operator-=(const Vec4& o) { v3 -= o.v3; h -= o.h; return *this; }
  constexpr Vec4& operator*=(double s) { v3 *= s; h *= s; return *this; }

  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
constexpr Vec4 operator-(const Vec4& a) { return {-a.v3, -a.h}; }
constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }

inline bool is_finite(const Vec4& a) { return is_finite(a.v3) && std::isfinite(a.h); }
inline double euclidean_norm(const Vec4& a) { return std::sqrt(norm2(a.v3) + a.h * a.h); }

// zeta = +1 (negative energy, sphere) or -1 (positive energy, hyperboloid).
enum class Signature : int { elliptic = 1, hyperbolic = -1 };

constexpr double zeta(Signature s) { return static_cast<double>(static_cast<int>(s)); }

// a.v3 . b.v3 + zeta a.h b.h
constexpr double metric_dot(const Vec4& a, const Vec4& b, Signature sig) {
  return dot(a.v3, b.v3) + zeta(sig) * a.h * b.h;
}

}  // namespace confham
