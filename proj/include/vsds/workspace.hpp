#pragma once

#include "vsds/types.hpp"

namespace vsds {

/// Master <-> remote mapping: x_m = scale * (x_r - remote_origin) + master_origin.
struct WorkspaceMap {
  double scale = 0.2;  // beta
  Point2 master_origin = Point2::Zero();
  Point2 remote_origin = Point2::Zero();

  [[nodiscard]] Point2 to_master(const Point2& x_r) const { return scale * (x_r - remote_origin) + master_origin; }
  [[nodiscard]] Point2 to_remote(const Point2& x_m) const { return (x_m - master_origin) / scale + remote_origin; }
  [[nodiscard]] Vel2 vel_to_master(const Vel2& v_r) const { return scale * v_r; }
  [[nodiscard]] Vel2 vel_to_remote(const Vel2& v_m) const { return v_m / scale; }
};

[[nodiscard]] inline Point2 map_remote_to_master(const WorkspaceMap& w, const Point2& x_r) { return w.to_master(x_r); }
[[nodiscard]] inline Point2 map_master_to_remote(const WorkspaceMap& w, const Point2& x_m) { return w.to_remote(x_m); }

}  // namespace vsds
