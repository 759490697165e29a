#include "vsds/session.hpp"

#include <algorithm>
#include <cmath>

#include "vsds/errors.hpp"
#include "vsds/human.hpp"

namespace vsds::session {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Idle: return "idle";
    case Mode::Guided: return "guided";
    case Mode::Free: return "free";
    case Mode::Recording: return "recording";
    case Mode::Learning: return "learning";
  }
  return "idle";
}

std::optional<Command> command_from_string(const std::string& s) {
  if (s == "start") return Command::Start;
  if (s == "stop") return Command::Stop;
  if (s == "reset") return Command::Reset;
  if (s == "begin_demo") return Command::BeginDemo;
  if (s == "end_demo") return Command::EndDemo;
  return std::nullopt;
}

Session::Session(sim::Scenario scenario, SessionConfig cfg) : cfg_(cfg) {
  if (!(cfg_.record_threshold >= 0.0) || !(cfg_.record_rate_hz > 0.0))
    throw InvalidArgument("invalid session configuration");
  set_scenario(std::move(scenario));
}

void Session::set_scenario(sim::Scenario scenario) {
  scenario.validate();
  sc_ = std::move(scenario);
  map_ = sc_.workspace();
  state_ = sim::MasterState{map_.to_master(sc_.start), Vel2::Zero(), state_.t};
  mode_ = Mode::Idle;
  plan_.reset();
  recording_.clear();
  force_window_.clear();
  omega_ = 0.0;
  u_c_ = Force2::Zero();
  goal_reported_ = false;
  in_contact_ = false;
}

void Session::raise(std::vector<Event>& out, std::string name, double value) {
  Event e{std::move(name), state_.t, value};
  events_.push_back(e);
  out.push_back(std::move(e));
}

void Session::start_guidance() {
  const Point2 x_r = remote_position();
  plan_ = plan_guidance(sc_.field(), x_r, map_, sc_.guidance);
  builds_.push_back({builds_.size(), state_.t, x_r});
  mode_ = Mode::Guided;
  goal_reported_ = false;
  force_window_.clear();
}

void Session::learn(std::vector<Event>& out) {
  if (recording_.size() >= 2) {
    IncrementalReport rep;
    sc_.model = std::make_shared<const gp::Model>(
        incremental_update(*sc_.model, recording_, sc_.ds, sc_.incremental, sc_.guidance.limits, &rep));
    last_update_ = rep;
    learned_.push_back(Demonstration{cfg_.record_rate_hz, recording_});
    raise(out, "learned", static_cast<double>(rep.added));
  }
  recording_.clear();
  try {
    start_guidance();
  } catch (const Error&) {
    mode_ = Mode::Idle;
    plan_.reset();
  }
}

std::vector<Event> Session::command(Command c) {
  std::vector<Event> out;
  switch (c) {
    case Command::Start:
      if (mode_ == Mode::Recording || mode_ == Mode::Learning) break;
      try {
        start_guidance();
      } catch (const Error&) {
        mode_ = Mode::Idle;
        plan_.reset();
      }
      break;
    case Command::Stop:
      if (mode_ == Mode::Recording) {
        mode_ = Mode::Learning;
      } else if (mode_ != Mode::Learning) {
        mode_ = Mode::Idle;
      }
      break;
    case Command::EndDemo:
      if (mode_ == Mode::Recording) mode_ = Mode::Learning;
      break;
    case Command::BeginDemo:
      if (mode_ == Mode::Recording || mode_ == Mode::Learning) break;
      mode_ = Mode::Recording;
      escape_point_ = remote_position();
      recording_.clear();
      record_ticks_ = 0;
      raise(out, "recording");
      break;
    case Command::Reset:
      state_ = sim::MasterState{map_.to_master(sc_.start), Vel2::Zero(), state_.t};
      mode_ = Mode::Idle;
      plan_.reset();
      recording_.clear();
      force_window_.clear();
      goal_reported_ = false;
      in_contact_ = false;
      break;
  }
  return out;
}

TickResult Session::tick(const Force2& u_h) {
  TickResult r;
  const Mode start_mode = mode_;
  const Point2 x_r = remote_position();
  const double dt = sc_.dt;
  Force2 u_c = Force2::Zero();
  omega_ = plan_ ? tunnel_activation(plan_->chain, state_.x) : 0.0;

  switch (mode_) {
    case Mode::Idle:
      break;
    case Mode::Guided:
      if (sc_.tunnel_gating && omega_ < plan_->threshold) {
        double peak = 0.0;
        for (const auto& [t, f] : force_window_)
          if (t >= state_.t - sc_.escape_window) peak = std::max(peak, f);
        mode_ = Mode::Free;
        escape_point_ = x_r;
        raise(r.events, "escaped", peak);
      } else {
        u_c = control_force(plan_->chain, sc_.guidance.vsds, state_.x, state_.v, plan_->chain.start());
      }
      break;
    case Mode::Free:
      if ((x_r - escape_point_).norm() > cfg_.record_threshold) {
        mode_ = Mode::Recording;
        recording_.clear();
        record_ticks_ = 0;
        raise(r.events, "recording");
      } else if (plan_ && omega_ >= plan_->threshold) {
        mode_ = Mode::Guided;
        u_c = control_force(plan_->chain, sc_.guidance.vsds, state_.x, state_.v, plan_->chain.start());
      }
      break;
    case Mode::Recording:
      break;
    case Mode::Learning:
      learn(r.events);
      break;
  }

  if (mode_ == Mode::Recording) {
    if (sim::log_tick(record_ticks_, dt, cfg_.record_rate_hz))
      recording_.push_back({x_r, map_.vel_to_remote(state_.v)});
    ++record_ticks_;
  }

  u_c_ = u_c;
  if (sim::log_tick(ticks_, dt, sc_.log_rate_hz))
    log_.push_back({state_.t, state_.x, state_.v, x_r, u_c, u_h, omega_, to_string(mode_)});

  force_window_.emplace_back(state_.t, u_h.norm());
  while (!force_window_.empty() && force_window_.front().first < state_.t - sc_.escape_window)
    force_window_.pop_front();

  const sim::MasterState prev = state_;
  state_ = sim::step_master(state_, u_c, u_h, sc_.mass, dt);
  ++ticks_;

  const Point2 next_r = remote_position();
  if (sim::check_collision(sc_.env, x_r, next_r)) {
    // Rigid contact: the remote tool stops at its last free position.
    state_.x = prev.x;
    state_.v = Vel2::Zero();
    if (!in_contact_) raise(r.events, "collision");
    in_contact_ = true;
  } else {
    in_contact_ = false;
  }

  const bool at_goal = (remote_position() - sc_.env.goal).norm() < sc_.env.goal_tol;
  // A chain rebuilt this tick is reported in Guided before any goal handling.
  if (start_mode == Mode::Learning) return r;
  if (at_goal && !goal_reported_ && mode_ != Mode::Learning) {
    goal_reported_ = true;
    raise(r.events, "goal");
    if (mode_ == Mode::Recording) {
      recording_.push_back({remote_position(), map_.vel_to_remote(state_.v)});
      mode_ = Mode::Learning;
    } else if (mode_ == Mode::Guided) {
      mode_ = Mode::Idle;
    }
  } else if (!at_goal && mode_ != Mode::Idle) {
    goal_reported_ = false;
  }
  return r;
}

ScriptRun run_script(const sim::Scenario& scenario, const sim::HumanSpec& human, SessionConfig cfg) {
  Session s(scenario, cfg);
  sim::HumanPolicy policy(human, s.workspace(), scenario.force_cap);
  s.start_guidance();

  ScriptRun run;
  run.modes.push_back(s.mode());
  bool escaped = false;
  bool learned = false;
  const auto max_ticks = static_cast<std::size_t>(std::ceil(scenario.t_max / scenario.dt));
  for (std::size_t k = 0; k < max_ticks; ++k) {
    const Force2 u_h = policy.force(s.master(), escaped);
    const auto res = s.tick(u_h);
    if (s.mode() != run.modes.back()) run.modes.push_back(s.mode());
    bool done = false;
    for (const auto& e : res.events) {
      if (e.name == "escaped") escaped = true;
      if (e.name == "learned") learned = true;
      if (e.name == "goal" && (learned || !escaped)) done = true;
    }
    // Learning finishes on the tick after the recording ends at the goal.
    if (learned && s.mode() != Mode::Learning && s.mode() != Mode::Recording &&
        (s.remote_position() - scenario.env.goal).norm() < scenario.env.goal_tol)
      done = true;
    if (done) break;
  }
  run.events = s.events();
  run.log = s.log();
  run.model = s.model();
  run.builds = s.chain_builds();
  run.update = s.last_update();
  run.t_end = s.master().t;
  return run;
}

}  // namespace vsds::session
