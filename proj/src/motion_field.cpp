#include "vsds/motion_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vsds/errors.hpp"

namespace vsds {

Vel2 eval_linear_ds(const LinearDs& ds, const Point2& x) { return ds(x); }

Mat2 rotation_matrix(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Mat2 modulation_matrix(const ModulationParams& p) {
  if (!(p.kappa > -1.0)) throw KappaOutOfRange("kappa must exceed -1, got " + std::to_string(p.kappa));
  return (1.0 + p.kappa) * rotation_matrix(p.phi);
}

ModulationParams demo_to_modulation(const Point2& x, const Vel2& v_demo, const LinearDs& ds,
                                    const ModulationLimits& lim) {
  const Vel2 fo = ds(x);
  const double n_fo = fo.norm();
  const double n_v = v_demo.norm();
  if (n_fo < lim.speed_floor || n_v < lim.speed_floor)
    throw DegenerateSample("demonstration sample too slow or too close to the attractor");
  ModulationParams p;
  p.phi = wrap_angle(std::atan2(cross2(fo, v_demo), fo.dot(v_demo)));
  p.kappa = std::clamp(n_v / n_fo - 1.0, lim.kappa_min, lim.kappa_max);
  return p;
}

ReshapedDs::ReshapedDs(LinearDs base, gp::ModelPtr regressor, ModulationLimits lim)
    : base_(base), regressor_(std::move(regressor)), lim_(lim) {
  if (!regressor_) throw InvalidArgument("reshaped DS requires a fitted regressor");
  if (!(base_.gain > 0.0)) throw InvalidArgument("linear DS gain must be positive");
}

ModulationParams ReshapedDs::modulation(const Point2& x) const {
  if (regressor_->dataset().empty()) return {};
  ModulationParams p = regressor_->predict(x).mean;
  p.kappa = std::clamp(p.kappa, lim_.kappa_min, lim_.kappa_max);
  return p;
}

Vel2 ReshapedDs::operator()(const Point2& x) const {
  const Vel2 fo = base_(x);
  if (regressor_->dataset().empty()) return fo;
  return modulation_matrix(modulation(x)) * fo;
}

Vel2 eval_reshaped_ds(const ReshapedDs& f, const Point2& x) { return f(x); }

double ReferencePath::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) l += (points[i] - points[i - 1]).norm();
  return l;
}

ReferencePath integrate_reference_path(const ReshapedDs& f, const Point2& x0, const PathIntegration& opt) {
  if (!(opt.dt > 0.0) || !(opt.goal_tol > 0.0)) throw InvalidArgument("path integration needs dt > 0 and goal_tol > 0");
  const Point2 goal = f.base().attractor;
  ReferencePath path;
  path.goal = goal;
  Point2 x = x0;
  path.points.push_back(x);
  std::size_t steps = 0;
  while ((x - goal).norm() >= opt.goal_tol) {
    if (steps == opt.max_steps)
      throw NoConvergence("reference path did not reach the attractor within " + std::to_string(opt.max_steps) +
                          " steps");
    x += opt.dt * f(x);
    ++steps;
    if (x != path.points.back()) path.points.push_back(x);
  }
  if (path.points.back() != goal) path.points.push_back(goal);
  return path;
}

}  // namespace vsds
