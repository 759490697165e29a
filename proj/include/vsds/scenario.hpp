#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "vsds/guidance.hpp"
#include "vsds/human.hpp"
#include "vsds/learning.hpp"
#include "vsds/teleop.hpp"

namespace vsds::sim {

enum class ControllerKind { Vsds, Flow, OpenLoop, Free };

[[nodiscard]] std::string to_string(ControllerKind k);
[[nodiscard]] ControllerKind controller_from_string(const std::string& s);

/// One reproducible experiment: environment, learned field, controller and
/// operator configuration.
struct Scenario {
  std::string name;
  Environment env;
  Point2 start = Point2::Zero();  // remote frame
  double beta = 0.2;
  Point2 master_origin = Point2::Zero();

  LinearDs ds;  // attractor equals env.goal
  gp::ModelPtr model = std::make_shared<const gp::Model>();

  GuidanceConfig guidance;
  IncrementalThresholds incremental;
  Mat2 flow_gain = Eigen::Vector2d(45.0, 20.0).asDiagonal();
  Mat2 openloop_stiffness = Eigen::Vector2d(250.0, 1800.0).asDiagonal();
  Mat2 openloop_damping = 25.0 * Mat2::Identity();

  ControllerKind controller = ControllerKind::Vsds;
  bool tunnel_gating = true;
  std::string human = "passive";
  std::map<std::string, HumanSpec> humans{{"passive", PassiveHuman{}}};

  double mass = 1.0;
  double dt = 1e-3;
  double t_max = 60.0;
  double force_cap = 30.0;
  double tremor_std = 0.0;  // N, Gaussian noise added to non-passive human forces
  std::uint64_t seed = 0;
  double log_rate_hz = 60.0;
  double escape_window = 1.0;  // s

  /// Remote origin of the workspace map is the trial start.
  [[nodiscard]] WorkspaceMap workspace() const { return {beta, master_origin, start}; }
  [[nodiscard]] ReshapedDs field() const { return ReshapedDs(ds, model, guidance.limits); }
  [[nodiscard]] const HumanSpec& human_spec(const std::string& key) const;

  void validate() const;
};

}  // namespace vsds::sim
