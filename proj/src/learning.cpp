#include "vsds/learning.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "vsds/errors.hpp"

namespace vsds {

void recompute_velocities(Demonstration& demo) {
  auto& s = demo.samples;
  const std::size_t n = s.size();
  if (n < 2) {
    for (auto& p : s) p.v = Vel2::Zero();
    return;
  }
  if (!(demo.rate_hz > 0.0)) throw InvalidArgument("demonstration rate must be positive");
  const double dt = 1.0 / demo.rate_hz;
  std::vector<Vel2> v(n);
  v[0] = (s[1].x - s[0].x) / dt;
  v[n - 1] = (s[n - 1].x - s[n - 2].x) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (s[i + 1].x - s[i - 1].x) / (2.0 * dt);
  for (std::size_t i = 0; i < n; ++i) s[i].v = v[i];
}

gp::Dataset dataset_from_demos(const std::vector<Demonstration>& demos, const LinearDs& ds,
                               const ModulationLimits& lim) {
  gp::Dataset d;
  for (const auto& demo : demos) {
    for (const auto& s : demo.samples) {
      try {
        d.add(s.x, demo_to_modulation(s.x, s.v, ds, lim));
      } catch (const DegenerateSample&) {
      }
    }
  }
  return d;
}

gp::Model incremental_update(const gp::Model& model, const std::vector<DemoSample>& demo, const LinearDs& ds,
                             const IncrementalThresholds& th, const ModulationLimits& lim,
                             IncrementalReport* report) {
  if (demo.empty()) throw InvalidArgument("incremental update needs a non-empty demonstration");
  IncrementalReport rep;

  gp::Dataset data = model.dataset();
  rep.removed = data.remove_if([&](const Point2& xg, const ModulationParams&) {
    return std::any_of(demo.begin(), demo.end(), [&](const DemoSample& s) { return (s.x - xg).norm() <= th.radius; });
  });

  const auto pruned = std::make_shared<const gp::Model>(gp::Model::fit(data, model.hyper()));
  const ReshapedDs field(ds, pruned, lim);

  for (const auto& s : demo) {
    const double n_d = s.v.norm();
    ModulationParams p;
    try {
      p = demo_to_modulation(s.x, s.v, ds, lim);
    } catch (const DegenerateSample&) {
      ++rep.skipped;
      continue;
    }
    const Vel2 pred = field(s.x);
    const double n_p = pred.norm();
    bool add = n_d - n_p >= th.speed_gap;
    if (!add) {
      if (n_p < lim.speed_floor) {
        add = true;
      } else {
        const double c = std::clamp(s.v.dot(pred) / (n_d * n_p), -1.0, 1.0);
        add = std::acos(c) >= th.angle_gap;
      }
    }
    if (!add) continue;
    if (data.add(s.x, p))
      ++rep.added;
    else
      ++rep.skipped;
  }

  if (report) *report = rep;
  return gp::Model::fit(std::move(data), model.hyper());
}

}  // namespace vsds
