#pragma once

#include <span>
#include <vector>

#include "vsds/types.hpp"

// Master-side dynamics, the baseline controllers and the task environment.
namespace vsds::sim {

/// Closed axis-aligned rectangle in the remote frame.
struct Rect {
  Point2 min = Point2::Zero();
  Point2 max = Point2::Zero();

  [[nodiscard]] bool contains(const Point2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
};

struct Environment {
  std::vector<Rect> walls;
  std::vector<Rect> obstacles;
  Point2 goal = Point2::Zero();
  double goal_tol = 0.01;

  void validate() const;
};

/// True iff the segment a-b touches a closed rectangle.
[[nodiscard]] bool segment_hits_rect(const Point2& a, const Point2& b, const Rect& r);

/// True iff the swept segment touches any wall or obstacle.
[[nodiscard]] bool check_collision(const Environment& env, const Point2& a, const Point2& b);

/// True iff any consecutive pair of the polyline collides.
[[nodiscard]] bool polyline_collides(const Environment& env, std::span<const Point2> pts);

struct MasterState {
  Point2 x = Point2::Zero();
  Vel2 v = Vel2::Zero();
  double t = 0.0;
};

/// Semi-implicit Euler step of m x_dd = u_c + u_h.
[[nodiscard]] MasterState step_master(const MasterState& s, const Force2& u_c, const Force2& u_h, double mass,
                                      double dt);

/// D_f (v_d - v_m).
[[nodiscard]] Force2 flow_controller(const Vel2& v_d, const Vel2& v_m, const Mat2& gain);

/// Clock-indexed reference sampled at a fixed period; clamps to the last
/// point past its end.
struct TimedTrajectory {
  double dt = 1e-3;
  std::vector<Point2> points;

  [[nodiscard]] Point2 at(double t) const;
  [[nodiscard]] double duration() const;
};

/// K_o (x_d(t) - x_m) - D_o v_m.
[[nodiscard]] Force2 openloop_impedance_controller(double t, const Point2& x_m, const Vel2& v_m,
                                                   const TimedTrajectory& ref, const Mat2& stiffness,
                                                   const Mat2& damping);

/// Mean of |j|^2 over central third differences of a uniformly sampled
/// trajectory. Zero when fewer than five samples exist.
[[nodiscard]] double mean_squared_jerk(std::span<const Point2> xs, double dt);

}  // namespace vsds::sim
