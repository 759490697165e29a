#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

// Planar state language shared by every module. Motion is restricted to the
// y-z plane, so component 0 is y and component 1 is z.
namespace vsds {

using Point2 = Eigen::Vector2d;  // m
using Vel2 = Eigen::Vector2d;    // m/s
using Force2 = Eigen::Vector2d;  // N
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;

/// Wrap an angle to (-pi, pi].
[[nodiscard]] inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

[[nodiscard]] inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// `v` rotated by +pi/2.
[[nodiscard]] inline Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

[[nodiscard]] inline bool is_finite(const Eigen::Vector2d& v) { return v.allFinite(); }

}  // namespace vsds
