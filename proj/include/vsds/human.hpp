#pragma once

#include <memory>
#include <mutex>
#include <variant>
#include <vector>

#include "vsds/teleop.hpp"
#include "vsds/workspace.hpp"

// Scripted stand-ins for the operator's hand force on the master.
namespace vsds::sim {

struct PassiveHuman {};

/// Spring-damper pull toward a point `lookahead` ahead of the operator's
/// projection on an intended remote-frame path. During the first `hold_time`
/// seconds the operator holds the master at its initial position instead.
struct FollowerHuman {
  double stiffness = 200.0;  // N/m
  double damping = 30.0;     // N s/m
  double lookahead = 0.03;   // m, remote frame
  double hold_time = 0.0;    // s
  std::vector<Point2> path;  // remote frame
};

/// Pushes with a linearly growing force along a fixed direction until the
/// guidance reports an escape, then follows `after_escape`.
struct EscaperHuman {
  double ramp_rate = 20.0;  // N/s
  double start_time = 0.0;  // s
  Vel2 direction = Vel2(0.0, 1.0);
  FollowerHuman after_escape;
};

/// Zero-order hold of the last force handed over by another thread.
class ForceSlot {
 public:
  void set(const Force2& f) {
    std::lock_guard lock(mu_);
    f_ = f;
  }
  [[nodiscard]] Force2 get() const {
    std::lock_guard lock(mu_);
    return f_;
  }

 private:
  mutable std::mutex mu_;
  Force2 f_ = Force2::Zero();
};

struct ExternalHuman {
  std::shared_ptr<ForceSlot> slot = std::make_shared<ForceSlot>();
};

using HumanSpec = std::variant<PassiveHuman, FollowerHuman, EscaperHuman, ExternalHuman>;

/// Stateful evaluation of a HumanSpec over one trial.
class HumanPolicy {
 public:
  HumanPolicy(HumanSpec spec, WorkspaceMap map, double force_cap = 30.0);

  /// Force at the current master state. `escaped` is true once the guidance
  /// has released the operator.
  [[nodiscard]] Force2 force(const MasterState& s, bool escaped);

  [[nodiscard]] const HumanSpec& spec() const { return spec_; }

 private:
  Force2 follow(const FollowerHuman& f, const MasterState& s, double t_local);

  HumanSpec spec_;
  WorkspaceMap map_;
  double cap_;
  bool have_origin_ = false;
  Point2 origin_ = Point2::Zero();
  std::size_t progress_seg_ = 0;
  std::vector<double> arc_;
  const std::vector<Point2>* arc_for_ = nullptr;
};

/// Nearest point on a polyline restricted to segments at or after
/// `first_seg`; returns (segment index, arc length at the projection).
struct Projection {
  std::size_t segment = 0;
  double arc = 0.0;
  Point2 point = Point2::Zero();
};
[[nodiscard]] Projection project_on_polyline(const std::vector<Point2>& pts, const std::vector<double>& arc,
                                             const Point2& x, std::size_t first_seg);
[[nodiscard]] Point2 point_at_arc(const std::vector<Point2>& pts, const std::vector<double>& arc, double s);
[[nodiscard]] std::vector<double> cumulative_arc(const std::vector<Point2>& pts);

}  // namespace vsds::sim
