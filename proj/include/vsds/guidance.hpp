#pragma once

#include <vector>

#include "vsds/authority.hpp"
#include "vsds/motion_field.hpp"
#include "vsds/vsds_controller.hpp"
#include "vsds/workspace.hpp"

namespace vsds {

struct GuidanceConfig {
  VsdsParams vsds;
  authority::StiffnessSchedule stiffness;
  authority::TunnelSchedule tunnel;
  PathIntegration integration;
  ModulationLimits limits;
};

/// Everything derived from one integral curve of the reshaped field: the
/// remote reference path, its attractors, the master-side chain with
/// variance-scheduled stiffness, and the tunnel threshold.
struct GuidancePlan {
  ReferencePath path;                    // remote frame
  std::vector<Point2> remote_attractors;  // x_0 .. x_N
  std::vector<double> variances;         // per local system (x_1 .. x_N)
  double mean_variance = 0.0;
  double threshold = 0.0;
  bool degenerate = false;               // start already at the goal
  AttractorChain chain;                  // master frame
};

/// Integrates the reference path from `remote_start`, resamples attractors,
/// schedules stiffness and the tunnel threshold from GP variance. Propagates
/// NoConvergence.
[[nodiscard]] GuidancePlan plan_guidance(const ReshapedDs& field, const Point2& remote_start, const WorkspaceMap& map,
                                         const GuidanceConfig& cfg);

}  // namespace vsds
