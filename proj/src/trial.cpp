#include "vsds/trial.hpp"

#include <cmath>
#include <deque>
#include <random>

#include "vsds/errors.hpp"

namespace vsds::sim {

bool log_tick(std::size_t k, double dt, double rate_hz) {
  if (k == 0) return true;
  const auto now = std::floor(static_cast<double>(k) * dt * rate_hz);
  const auto prev = std::floor(static_cast<double>(k - 1) * dt * rate_hz);
  return now > prev;
}

TimedTrajectory openloop_reference(const ReshapedDs& field, const Point2& remote_start, const WorkspaceMap& map,
                                   double dt, const PathIntegration& integ) {
  PathIntegration opt = integ;
  opt.dt = dt;
  const ReferencePath path = integrate_reference_path(field, remote_start, opt);
  TimedTrajectory ref;
  ref.dt = dt;
  ref.points.reserve(path.points.size());
  for (const auto& p : path.points) ref.points.push_back(map.to_master(p));
  return ref;
}

TrialResult run_trial(const Scenario& sc, ControllerKind controller, const HumanSpec& human) {
  sc.validate();
  const WorkspaceMap map = sc.workspace();
  const ReshapedDs field = sc.field();

  TrialResult res;
  if (controller == ControllerKind::Vsds) res.plan = plan_guidance(field, sc.start, map, sc.guidance);
  if (controller == ControllerKind::OpenLoop)
    res.openloop_reference = openloop_reference(field, sc.start, map, sc.dt, sc.guidance.integration);

  HumanPolicy policy(human, map, sc.force_cap);
  const bool noisy = sc.tremor_std > 0.0 && !std::holds_alternative<PassiveHuman>(human);
  std::mt19937_64 rng(sc.seed);
  std::normal_distribution<double> tremor(0.0, sc.tremor_std > 0.0 ? sc.tremor_std : 1.0);

  MasterState s;
  s.x = map.to_master(sc.start);
  bool escaped = false;
  std::deque<std::pair<double, double>> force_window;  // (t, |u_h|)

  const auto max_ticks = static_cast<std::size_t>(std::ceil(sc.t_max / sc.dt));
  res.remote_path.push_back(sc.start);
  TrialMetrics& m = res.metrics;

  for (std::size_t k = 0;; ++k) {
    const Point2 x_r = map.to_remote(s.x);

    Force2 u_c = Force2::Zero();
    double omega = 0.0;
    std::string mode = to_string(controller);
    switch (controller) {
      case ControllerKind::Vsds: {
        const auto& plan = *res.plan;
        omega = tunnel_activation(plan.chain, s.x);
        if (!escaped && sc.tunnel_gating && omega < plan.threshold) {
          escaped = true;
          m.escaped = true;
          m.escape_time = s.t;
          for (const auto& [t, f] : force_window)
            if (t >= s.t - sc.escape_window) m.peak_escape_force = std::max(m.peak_escape_force, f);
        }
        if (escaped) {
          mode = "free";
        } else {
          mode = "guided";
          u_c = control_force(plan.chain, sc.guidance.vsds, s.x, s.v, plan.chain.start());
        }
        break;
      }
      case ControllerKind::Flow: {
        const Vel2 v_d = map.vel_to_master(field(x_r));
        u_c = flow_controller(v_d, s.v, sc.flow_gain);
        break;
      }
      case ControllerKind::OpenLoop:
        u_c = openloop_impedance_controller(s.t, s.x, s.v, *res.openloop_reference, sc.openloop_stiffness,
                                            sc.openloop_damping);
        break;
      case ControllerKind::Free:
        break;
    }

    Force2 u_h = policy.force(s, escaped);
    if (noisy) u_h += Force2(tremor(rng), tremor(rng));

    if (log_tick(k, sc.dt, sc.log_rate_hz))
      res.log.push_back({s.t, s.x, s.v, x_r, u_c, u_h, omega, mode});

    if (k == max_ticks) {
      m.timeout = true;
      break;
    }

    force_window.emplace_back(s.t, u_h.norm());
    while (!force_window.empty() && force_window.front().first < s.t - sc.escape_window) force_window.pop_front();
    m.peak_control_force = std::max(m.peak_control_force, u_c.norm());
    res.control_forces.push_back(u_c);

    s = step_master(s, u_c, u_h, sc.mass, sc.dt);
    m.max_kinetic_energy = std::max(m.max_kinetic_energy, 0.5 * sc.mass * s.v.squaredNorm());
    const Point2 next_r = map.to_remote(s.x);
    res.remote_path.push_back(next_r);

    if (check_collision(sc.env, x_r, next_r)) {
      m.collision = true;
      break;
    }
    if ((next_r - sc.env.goal).norm() < sc.env.goal_tol) {
      m.success = true;
      break;
    }
  }

  m.execution_time = s.t;
  m.mean_squared_jerk = mean_squared_jerk(res.remote_path, sc.dt);
  return res;
}

}  // namespace vsds::sim
