#include "vsds/server.hpp"

#include "vsds/errors.hpp"
#include "vsds/io.hpp"

namespace vsds::server {

namespace {

json vec(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

}  // namespace

Host::Host(sim::Scenario scenario, GridSpec grid, std::filesystem::path data_dir, double broadcast_hz)
    : session_(std::move(scenario)),
      grid_(grid),
      data_dir_(std::move(data_dir)),
      broadcast_hz_(broadcast_hz),
      dt_(session_.scenario().dt) {
  if (!(broadcast_hz_ > 0.0)) throw InvalidArgument("broadcast rate must be positive");
}

json Host::frame(json body) {
  body["seq"] = seq_++;
  return body;
}

void Host::receive(const std::string& text) {
  auto reject = [this](std::string message) {
    std::lock_guard lock(queue_mu_);
    queue_.push_back({"error", json{{"message", std::move(message)}}});
  };
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    reject(std::string("malformed frame: ") + e.what());
    return;
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    reject("frame must be an object with a string 'type'");
    return;
  }
  const auto type = j["type"].get<std::string>();
  if (type == "force") {
    if (!j.contains("fy") || !j.contains("fz") || !j["fy"].is_number() || !j["fz"].is_number()) {
      reject("force frame needs numeric fy and fz");
      return;
    }
  } else if (type == "command") {
    if (!j.contains("name") || !j["name"].is_string()) {
      reject("command frame needs a string 'name'");
      return;
    }
  } else {
    reject("unknown frame type '" + type + "'");
    return;
  }
  std::lock_guard lock(queue_mu_);
  queue_.push_back({type, std::move(j)});
}

void Host::apply_command(const json& body, std::vector<json>& out) {
  const auto name = body["name"].get<std::string>();
  if (name == "set_scenario") {
    try {
      sim::Scenario sc;
      if (body.contains("scenario")) {
        sc = io::scenario_from_json(body["scenario"], data_dir_);
      } else if (body.contains("path")) {
        const std::filesystem::path rel = body["path"].get<std::string>();
        if (rel.is_absolute() || rel.lexically_normal().string().starts_with(".."))
          throw InvalidArgument("scenario path must stay inside the data directory");
        sc = io::load_scenario(data_dir_ / rel);
      } else {
        throw InvalidArgument("set_scenario needs 'scenario' or 'path'");
      }
      session_.set_scenario(std::move(sc));
      dt_ = session_.scenario().dt;
      u_h_ = Force2::Zero();
      field_dirty_ = true;
    } catch (const std::exception& e) {
      out.push_back(frame({{"type", "error"}, {"message", e.what()}}));
    }
    return;
  }
  const auto cmd = session::command_from_string(name);
  if (!cmd) {
    out.push_back(frame({{"type", "error"}, {"message", "unknown command '" + name + "'"}}));
    return;
  }
  if (*cmd == session::Command::Reset) u_h_ = Force2::Zero();
  for (const auto& e : session_.command(*cmd))
    out.push_back(frame({{"type", "event"}, {"name", e.name}, {"t", e.t}, {"value", e.value}}));
}

std::vector<json> Host::tick() {
  std::vector<Incoming> q;
  {
    std::lock_guard lock(queue_mu_);
    q.swap(queue_);
  }
  std::vector<json> out;
  const double cap = session_.scenario().force_cap;
  for (const auto& m : q) {
    if (m.type == "force") {
      if (m.body.contains("seq") && m.body["seq"].is_number_integer()) {
        const auto s = m.body["seq"].get<std::int64_t>();
        if (s <= last_client_seq_) continue;  // stale
        last_client_seq_ = s;
      }
      Force2 f(m.body["fy"].get<double>(), m.body["fz"].get<double>());
      if (!is_finite(f)) continue;
      const double n = f.norm();
      if (n > cap) f *= cap / n;
      u_h_ = f;
    } else if (m.type == "command") {
      apply_command(m.body, out);
    } else {
      out.push_back(frame({{"type", "error"}, {"message", m.body["message"]}}));
    }
  }

  const auto res = session_.tick(u_h_);
  for (const auto& e : res.events)
    out.push_back(frame({{"type", "event"}, {"name", e.name}, {"t", e.t}, {"value", e.value}}));
  if (session_.chain_builds().size() != builds_seen_) {
    builds_seen_ = session_.chain_builds().size();
    field_dirty_ = true;
  }
  if (field_dirty_) {
    out.push_back(field_frame());
    field_dirty_ = false;
  }
  if (sim::log_tick(ticks_, dt_, broadcast_hz_)) out.push_back(state_frame());
  ++ticks_;
  return out;
}

std::vector<json> Host::snapshot() { return {state_frame(), field_frame()}; }

json Host::state_frame() {
  const auto& m = session_.master();
  return frame({{"type", "state"},
                {"t", m.t},
                {"x_m", vec(m.x)},
                {"v_m", vec(m.v)},
                {"x_r", vec(session_.remote_position())},
                {"u_c", vec(session_.last_control())},
                {"mode", session::to_string(session_.mode())},
                {"omega_max", session_.omega_max()}});
}

json Host::field_frame() {
  json body = to_json(export_field(session_.field(), session_.plan(), session_.workspace(),
                                   session_.scenario().guidance.vsds, grid_));
  body["type"] = "field";
  return frame(std::move(body));
}

}  // namespace vsds::server
