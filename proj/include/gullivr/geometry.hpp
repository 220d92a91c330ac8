#pragma once

#include <cmath>
#include <numbers>

namespace gullivr {

/// Point or vector on the horizontal ground plane (x, z).
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.z}; }
  friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.z}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

/// y is up.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr Vec3 operator*(Vec3 v, double s) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

inline double length(Vec2 v) { return std::hypot(v.x, v.z); }
inline double length(Vec3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(Vec2 a, Vec2 b) { return length(a - b); }

inline Vec2 horizontal(Vec3 v) { return {v.x, v.z}; }

inline Vec3 normalized(Vec3 v) {
  const double n = length(v);
  return {v.x / n, v.y / n, v.z / n};
}

// Headings are measured in the ground plane from +x toward +z, so heading h
// points along (cos h, sin h).
inline Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }
inline double heading_of(Vec2 v) { return std::atan2(v.z, v.x); }

/// Rotates a ground-plane vector by `angle`; rotate(heading_vector(h), a)
/// equals heading_vector(h + a).
inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.z, s * v.x + c * v.z};
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace gullivr
