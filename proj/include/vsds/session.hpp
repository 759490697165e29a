#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "vsds/guidance.hpp"
#include "vsds/learning.hpp"
#include "vsds/scenario.hpp"
#include "vsds/trial.hpp"

// Live shared-control loop: guidance until the operator leaves the tunnel,
// free motion, recording of the corrective demonstration, incremental
// learning, and guidance rebuilt from wherever the operator ended up.
namespace vsds::session {

enum class Mode { Idle, Guided, Free, Recording, Learning };

[[nodiscard]] std::string to_string(Mode m);

enum class Command { Start, Stop, Reset, BeginDemo, EndDemo };

[[nodiscard]] std::optional<Command> command_from_string(const std::string& s);

struct Event {
  std::string name;  // escaped | recording | learned | goal | collision
  double t = 0.0;
  double value = 0.0;  // peak escape force for "escaped", points added for "learned"
};

struct SessionConfig {
  double record_threshold = 0.02;  // m, remote-frame displacement from the escape point
  double record_rate_hz = 60.0;
};

struct ChainBuild {
  std::uint64_t index = 0;
  double t = 0.0;
  Point2 remote_start = Point2::Zero();
};

/// Output of one tick.
struct TickResult {
  Force2 u_c = Force2::Zero();
  std::vector<Event> events;  // raised during this tick
};

/// Single-owner session state. Not thread-safe; the server serializes access.
class Session {
 public:
  explicit Session(sim::Scenario scenario, SessionConfig cfg = {});

  /// Plans guidance from the current master position and enters Guided.
  /// Propagates NoConvergence.
  void start_guidance();

  /// Advances the loop by one scenario time step under the given operator
  /// force.
  TickResult tick(const Force2& u_h);

  /// Commands take effect immediately; events they raise are returned.
  std::vector<Event> command(Command c);

  /// Replaces the scenario and resets the session with the scenario's model.
  void set_scenario(sim::Scenario scenario);

  [[nodiscard]] Mode mode() const { return mode_; }
  /// True while the operator has been released by the guidance.
  [[nodiscard]] bool released() const { return mode_ == Mode::Free || mode_ == Mode::Recording || mode_ == Mode::Learning; }
  [[nodiscard]] const sim::MasterState& master() const { return state_; }
  [[nodiscard]] Point2 remote_position() const { return map_.to_remote(state_.x); }
  [[nodiscard]] const WorkspaceMap& workspace() const { return map_; }
  [[nodiscard]] const sim::Scenario& scenario() const { return sc_; }
  [[nodiscard]] const gp::ModelPtr& model() const { return sc_.model; }
  [[nodiscard]] ReshapedDs field() const { return sc_.field(); }
  [[nodiscard]] const std::optional<GuidancePlan>& plan() const { return plan_; }
  [[nodiscard]] double omega_max() const { return omega_; }
  [[nodiscard]] const Force2& last_control() const { return u_c_; }
  [[nodiscard]] const std::vector<Event>& events() const { return events_; }
  [[nodiscard]] const std::vector<sim::LogRecord>& log() const { return log_; }
  [[nodiscard]] const std::vector<ChainBuild>& chain_builds() const { return builds_; }
  [[nodiscard]] const std::vector<DemoSample>& recording() const { return recording_; }
  [[nodiscard]] const std::vector<Demonstration>& learned_demos() const { return learned_; }
  [[nodiscard]] const IncrementalReport& last_update() const { return last_update_; }

 private:
  void learn(std::vector<Event>& out);
  void raise(std::vector<Event>& out, std::string name, double value = 0.0);

  sim::Scenario sc_;
  SessionConfig cfg_;
  WorkspaceMap map_;
  sim::MasterState state_;
  Mode mode_ = Mode::Idle;
  std::optional<GuidancePlan> plan_;
  double omega_ = 0.0;
  Force2 u_c_ = Force2::Zero();
  Point2 escape_point_ = Point2::Zero();  // remote frame
  std::deque<std::pair<double, double>> force_window_;  // (t, |u_h|)
  std::vector<DemoSample> recording_;
  std::vector<Demonstration> learned_;
  IncrementalReport last_update_;
  std::vector<Event> events_;
  std::vector<sim::LogRecord> log_;
  std::vector<ChainBuild> builds_;
  std::size_t ticks_ = 0;
  std::size_t record_ticks_ = 0;
  bool goal_reported_ = false;
  bool in_contact_ = false;
};

/// Result of driving a session with a scripted operator.
struct ScriptRun {
  std::vector<Event> events;
  std::vector<Mode> modes;  // distinct consecutive modes visited
  std::vector<sim::LogRecord> log;
  gp::ModelPtr model;
  std::vector<ChainBuild> builds;
  IncrementalReport update;
  double t_end = 0.0;
};

/// Starts guidance at the scenario start and ticks until the first goal event
/// after a learning cycle, a goal event without any escape, or t_max.
[[nodiscard]] ScriptRun run_script(const sim::Scenario& scenario, const sim::HumanSpec& human, SessionConfig cfg = {});

}  // namespace vsds::session
