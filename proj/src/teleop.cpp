#include "vsds/teleop.hpp"

#include <algorithm>
#include <cmath>

#include "vsds/errors.hpp"

namespace vsds::sim {

void Environment::validate() const {
  if (!(goal_tol > 0.0)) throw InvalidArgument("goal tolerance must be positive");
  auto check = [&](const Rect& r) {
    if (!(r.min.x() <= r.max.x() && r.min.y() <= r.max.y())) throw InvalidArgument("rectangle with min > max");
    if (r.contains(goal)) throw InvalidArgument("goal lies inside a wall or obstacle");
  };
  for (const auto& r : walls) check(r);
  for (const auto& r : obstacles) check(r);
}

bool segment_hits_rect(const Point2& a, const Point2& b, const Rect& r) {
  // Slab clipping of the parameter interval [0, 1].
  double t0 = 0.0;
  double t1 = 1.0;
  const Point2 d = b - a;
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (a[k] < r.min[k] || a[k] > r.max[k]) return false;
      continue;
    }
    double lo = (r.min[k] - a[k]) / d[k];
    double hi = (r.max[k] - a[k]) / d[k];
    if (lo > hi) std::swap(lo, hi);
    t0 = std::max(t0, lo);
    t1 = std::min(t1, hi);
    if (t0 > t1) return false;
  }
  return true;
}

bool check_collision(const Environment& env, const Point2& a, const Point2& b) {
  for (const auto& r : env.walls)
    if (segment_hits_rect(a, b, r)) return true;
  for (const auto& r : env.obstacles)
    if (segment_hits_rect(a, b, r)) return true;
  return false;
}

bool polyline_collides(const Environment& env, std::span<const Point2> pts) {
  if (pts.size() == 1) return check_collision(env, pts[0], pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (check_collision(env, pts[i - 1], pts[i])) return true;
  return false;
}

MasterState step_master(const MasterState& s, const Force2& u_c, const Force2& u_h, double mass, double dt) {
  if (!(dt > 0.0) || !(mass > 0.0)) throw InvalidArgument("step needs dt > 0 and mass > 0");
  MasterState n;
  n.v = s.v + (dt / mass) * (u_c + u_h);
  n.x = s.x + dt * n.v;
  n.t = s.t + dt;
  return n;
}

Force2 flow_controller(const Vel2& v_d, const Vel2& v_m, const Mat2& gain) { return gain * (v_d - v_m); }

Point2 TimedTrajectory::at(double t) const {
  if (points.empty()) throw InvalidArgument("empty timed trajectory");
  if (t <= 0.0) return points.front();
  const double k = t / dt;
  const auto i = static_cast<std::size_t>(std::floor(k));
  if (i + 1 >= points.size()) return points.back();
  const double f = k - static_cast<double>(i);
  return points[i] + f * (points[i + 1] - points[i]);
}

double TimedTrajectory::duration() const {
  return points.empty() ? 0.0 : dt * static_cast<double>(points.size() - 1);
}

Force2 openloop_impedance_controller(double t, const Point2& x_m, const Vel2& v_m, const TimedTrajectory& ref,
                                     const Mat2& stiffness, const Mat2& damping) {
  return stiffness * (ref.at(t) - x_m) - damping * v_m;
}

double mean_squared_jerk(std::span<const Point2> xs, double dt) {
  if (xs.size() < 5) return 0.0;
  const double scale = 1.0 / (2.0 * dt * dt * dt);
  double acc = 0.0;
  for (std::size_t k = 2; k + 2 < xs.size(); ++k) {
    const Point2 j = scale * (xs[k + 2] - 2.0 * xs[k + 1] + 2.0 * xs[k - 1] - xs[k - 2]);
    acc += j.squaredNorm();
  }
  return acc / static_cast<double>(xs.size() - 4);
}

}  // namespace vsds::sim
