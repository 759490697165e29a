#include "vsds/authority.hpp"

#include <cmath>

#include "vsds/errors.hpp"

namespace vsds::authority {

namespace {

// sin(pi * (v - lo) / (hi - lo) - pi / 2), saturating to -1 / +1 outside.
double blend(double v, double lo, double hi) {
  if (v < lo) return -1.0;
  if (v > hi) return 1.0;
  return std::sin(kPi * (v - lo) / (hi - lo) - kPi / 2.0);
}

}  // namespace

void StiffnessSchedule::validate() const {
  if (!(k_par > 0.0)) throw InvalidArgument("k_par must be positive");
  if (!(a1 > a2 && a2 > 0.0)) throw InvalidArgument("stiffness schedule needs a1 > a2 > 0");
  if (!(var_low < var_high)) throw InvalidArgument("stiffness schedule needs var_low < var_high");
}

void TunnelSchedule::validate() const {
  if (!(b1 - b2 > 0.0 && b1 + b2 < 1.0)) throw InvalidArgument("tunnel schedule needs 0 < b1 - b2 and b1 + b2 < 1");
  if (!(var_low < var_high)) throw InvalidArgument("tunnel schedule needs var_low < var_high");
}

double stiffness_from_variance(double variance, const StiffnessSchedule& s) {
  return s.a1 - s.a2 * blend(variance, s.var_low, s.var_high);
}

std::vector<AxisStiffness> build_stiffness_profile(std::span<const Point2> remote_attractors, const gp::Model& gp,
                                                   const StiffnessSchedule& s) {
  s.validate();
  if (remote_attractors.empty()) throw InvalidArgument("stiffness profile needs at least one attractor");
  std::vector<AxisStiffness> out;
  out.reserve(remote_attractors.size());
  for (const auto& x : remote_attractors) out.push_back({s.k_par, stiffness_from_variance(gp.variance(x), s)});
  return out;
}

double mean_path_variance(std::span<const Point2> remote_attractors, const gp::Model& gp) {
  if (remote_attractors.empty()) throw InvalidArgument("mean path variance needs at least one attractor");
  double sum = 0.0;
  for (const auto& x : remote_attractors) sum += gp.variance(x);
  return sum / static_cast<double>(remote_attractors.size());
}

double tunnel_threshold_from_variance(double mean_variance, const TunnelSchedule& t) {
  return t.b1 + t.b2 * blend(mean_variance, t.var_low, t.var_high);
}

}  // namespace vsds::authority
