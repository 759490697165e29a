#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsds/guidance.hpp"
#include "vsds/scenario.hpp"

namespace vsds::sim {

struct TrialMetrics {
  bool success = false;
  bool collision = false;
  bool timeout = false;
  double execution_time = 0.0;     // s
  double mean_squared_jerk = 0.0;  // m^2/s^6, remote trajectory
  bool escaped = false;
  double escape_time = 0.0;
  double peak_escape_force = 0.0;  // N, over the window before the escape
  double peak_control_force = 0.0; // N
  double max_kinetic_energy = 0.0; // J
};

/// One decimated telemetry sample.
struct LogRecord {
  double t = 0.0;
  Point2 x_m = Point2::Zero();
  Vel2 v_m = Vel2::Zero();
  Point2 x_r = Point2::Zero();
  Force2 u_c = Force2::Zero();
  Force2 u_h = Force2::Zero();
  double omega_max = 0.0;  // tunnel activation, 0 when no chain is active
  std::string mode;
};

struct TrialResult {
  TrialMetrics metrics;
  std::vector<LogRecord> log;        // decimated to scenario.log_rate_hz
  std::vector<Point2> remote_path;   // every tick, including the start
  std::vector<Force2> control_forces;  // every tick
  std::optional<GuidancePlan> plan;  // VSDS only
  std::optional<TimedTrajectory> openloop_reference;  // master frame
};

/// Fixed-step closed loop. A timeout is reported through the metrics, not
/// thrown.
[[nodiscard]] TrialResult run_trial(const Scenario& scenario, ControllerKind controller, const HumanSpec& human);

/// Decimation predicate shared by the trial loop and the session: tick k is
/// logged iff floor(k dt rate) advanced since tick k - 1 (tick 0 always).
[[nodiscard]] bool log_tick(std::size_t k, double dt, double rate_hz);

/// Open-loop baseline reference: f_r integrated from the start at dt and
/// mapped to the master.
[[nodiscard]] TimedTrajectory openloop_reference(const ReshapedDs& field, const Point2& remote_start,
                                                 const WorkspaceMap& map, double dt, const PathIntegration& integ);

}  // namespace vsds::sim
