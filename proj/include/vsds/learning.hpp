#pragma once

#include <vector>

#include "vsds/gp.hpp"
#include "vsds/motion_field.hpp"

namespace vsds {

struct DemoSample {
  Point2 x = Point2::Zero();  // m, remote frame
  Vel2 v = Vel2::Zero();      // m/s

  friend bool operator==(const DemoSample&, const DemoSample&) = default;
};

/// One demonstration recorded at a fixed rate.
struct Demonstration {
  double rate_hz = 60.0;
  std::vector<DemoSample> samples;

  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

/// Overwrites velocities with central differences of the positions
/// (one-sided at the ends).
void recompute_velocities(Demonstration& demo);

/// Builds the initial regression dataset from demonstrations. Samples whose
/// velocity or nominal flow falls below the speed floor are skipped, as are
/// repeated positions.
[[nodiscard]] gp::Dataset dataset_from_demos(const std::vector<Demonstration>& demos, const LinearDs& ds,
                                             const ModulationLimits& lim = {});

/// Sparsification thresholds of the incremental update.
struct IncrementalThresholds {
  double radius = 0.03;       // r_th, m
  double speed_gap = 0.05;    // delta_1, m/s
  double angle_gap = 0.2;     // delta_2, rad
};

struct IncrementalReport {
  std::size_t removed = 0;
  std::size_t added = 0;
  std::size_t skipped = 0;  // degenerate or duplicate demo samples
};

/// Trajectory-sparsified dataset update.
///
/// Pass 1 drops every stored point within `radius` of any new sample. Pass 2
/// predicts the reshaped velocity at each new sample from the pass-1 model and
/// stores the sample when the demonstrated speed exceeds the prediction by at
/// least `speed_gap` or the directions differ by at least `angle_gap`. The
/// dataset is refit once at the end.
[[nodiscard]] gp::Model incremental_update(const gp::Model& model, const std::vector<DemoSample>& demo,
                                           const LinearDs& ds, const IncrementalThresholds& th = {},
                                           const ModulationLimits& lim = {}, IncrementalReport* report = nullptr);

}  // namespace vsds
