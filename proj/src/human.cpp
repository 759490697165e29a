#include "vsds/human.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsds/errors.hpp"

namespace vsds::sim {

std::vector<double> cumulative_arc(const std::vector<Point2>& pts) {
  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) arc[i] = arc[i - 1] + (pts[i] - pts[i - 1]).norm();
  return arc;
}

Projection project_on_polyline(const std::vector<Point2>& pts, const std::vector<double>& arc, const Point2& x,
                               std::size_t first_seg) {
  Projection best;
  if (pts.size() == 1) {
    best.point = pts[0];
    return best;
  }
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = first_seg; i + 1 < pts.size(); ++i) {
    const Point2 d = pts[i + 1] - pts[i];
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((x - pts[i]).dot(d) / len2, 0.0, 1.0) : 0.0;
    const Point2 p = pts[i] + t * d;
    const double d2 = (x - p).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best.segment = i;
      best.point = p;
      best.arc = arc[i] + t * (arc[i + 1] - arc[i]);
    }
  }
  return best;
}

Point2 point_at_arc(const std::vector<Point2>& pts, const std::vector<double>& arc, double s) {
  if (s <= 0.0) return pts.front();
  if (s >= arc.back()) return pts.back();
  const auto it = std::upper_bound(arc.begin(), arc.end(), s);
  const auto j = static_cast<std::size_t>(it - arc.begin());
  const double seg = arc[j] - arc[j - 1];
  const double t = seg > 0.0 ? (s - arc[j - 1]) / seg : 0.0;
  return pts[j - 1] + t * (pts[j] - pts[j - 1]);
}

HumanPolicy::HumanPolicy(HumanSpec spec, WorkspaceMap map, double force_cap)
    : spec_(std::move(spec)), map_(map), cap_(force_cap) {
  if (!(cap_ > 0.0)) throw InvalidArgument("human force cap must be positive");
  auto check_follower = [](const FollowerHuman& f) {
    if (!(f.stiffness > 0.0) || !(f.damping >= 0.0) || !(f.lookahead >= 0.0) || !(f.hold_time >= 0.0))
      throw InvalidArgument("follower parameters must be non-negative (stiffness positive)");
    if (f.path.empty()) throw InvalidArgument("follower needs an intent path");
  };
  if (const auto* f = std::get_if<FollowerHuman>(&spec_)) check_follower(*f);
  if (const auto* e = std::get_if<EscaperHuman>(&spec_)) {
    if (!(e->ramp_rate > 0.0)) throw InvalidArgument("escaper ramp rate must be positive");
    if (!(e->direction.norm() > 0.0)) throw InvalidArgument("escaper direction must be non-zero");
    check_follower(e->after_escape);
  }
}

Force2 HumanPolicy::follow(const FollowerHuman& f, const MasterState& s, double t_local) {
  if (!have_origin_) {
    origin_ = s.x;
    have_origin_ = true;
  }
  Point2 target_m;
  if (t_local < f.hold_time) {
    target_m = origin_;
  } else {
    if (arc_for_ != &f.path) {
      arc_ = cumulative_arc(f.path);
      arc_for_ = &f.path;
      progress_seg_ = 0;
    }
    const Point2 x_r = map_.to_remote(s.x);
    const Projection p = project_on_polyline(f.path, arc_, x_r, progress_seg_);
    progress_seg_ = p.segment;
    target_m = map_.to_master(point_at_arc(f.path, arc_, p.arc + f.lookahead));
  }
  Force2 u = f.stiffness * (target_m - s.x) - f.damping * s.v;
  const double n = u.norm();
  if (n > cap_) u *= cap_ / n;
  return u;
}

Force2 HumanPolicy::force(const MasterState& s, bool escaped) {
  return std::visit(
      [&](const auto& h) -> Force2 {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, PassiveHuman>) {
          return Force2::Zero();
        } else if constexpr (std::is_same_v<T, FollowerHuman>) {
          return follow(h, s, s.t);
        } else if constexpr (std::is_same_v<T, EscaperHuman>) {
          if (escaped) return follow(h.after_escape, s, std::numeric_limits<double>::infinity());
          if (s.t < h.start_time) return Force2::Zero();
          return h.ramp_rate * (s.t - h.start_time) * h.direction.normalized();
        } else {
          return h.slot->get();
        }
      },
      spec_);
}

}  // namespace vsds::sim
