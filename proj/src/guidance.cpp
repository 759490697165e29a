#include "vsds/guidance.hpp"

#include <span>

#include "vsds/errors.hpp"

namespace vsds {

GuidancePlan plan_guidance(const ReshapedDs& field, const Point2& remote_start, const WorkspaceMap& map,
                           const GuidanceConfig& cfg) {
  cfg.vsds.validate();
  cfg.tunnel.validate();
  GuidancePlan plan;
  plan.path = integrate_reference_path(field, remote_start, cfg.integration);
  try {
    plan.remote_attractors = sample_attractors(plan.path, cfg.vsds.spacing);
  } catch (const PathTooShort&) {
    plan.degenerate = true;
    plan.remote_attractors = {remote_start, plan.path.goal};
  }

  const auto& xs = plan.remote_attractors;
  const std::size_t n = xs.size() - 1;
  std::vector<Vel2> dirs;
  dirs.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    try {
      dirs.push_back(local_direction(field, xs[i], cfg.limits.speed_floor));
    } catch (const DegenerateDirection&) {
      const Vel2 seg = xs[i] - xs[i - 1];
      dirs.push_back(seg.norm() > 0.0 ? Vel2(seg.normalized()) : Vel2(1.0, 0.0));
    }
  }

  const std::span<const Point2> systems(xs.data() + 1, n);
  const auto stiffness = authority::build_stiffness_profile(systems, field.regressor(), cfg.stiffness);
  plan.variances.reserve(n);
  for (const auto& x : systems) plan.variances.push_back(field.regressor().variance(x));
  plan.mean_variance = authority::mean_path_variance(systems, field.regressor());
  plan.threshold = authority::tunnel_threshold_from_variance(plan.mean_variance, cfg.tunnel);

  const double fallback_width = cfg.vsds.kernel_ratio * map.scale * cfg.vsds.spacing;
  plan.chain = AttractorChain::build(xs, dirs, stiffness, map, cfg.vsds.kernel_ratio, cfg.vsds.tunnel_kernel_ratio,
                                     fallback_width);
  return plan;
}

}  // namespace vsds
