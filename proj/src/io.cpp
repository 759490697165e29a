#include "vsds/io.hpp"

#include <fstream>
#include <sstream>

#include "vsds/errors.hpp"

namespace vsds::io {

namespace {

Mat2 mat_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw FormatError("expected a 2x2 matrix");
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
  return m;
}

json mat_json(const Mat2& m) { return json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

sim::Rect rect_from(const json& j) { return {point_from(j.at("min")), point_from(j.at("max"))}; }
json rect_json(const sim::Rect& r) { return {{"min", point_json(r.min)}, {"max", point_json(r.max)}}; }

std::vector<Point2> points_from(const json& j) {
  std::vector<Point2> out;
  for (const auto& p : j) out.push_back(point_from(p));
  return out;
}

json points_json(const std::vector<Point2>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

template <class T>
void get_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

sim::FollowerHuman follower_from(const json& j) {
  sim::FollowerHuman f;
  get_opt(j, "stiffness", f.stiffness);
  get_opt(j, "damping", f.damping);
  get_opt(j, "lookahead", f.lookahead);
  get_opt(j, "hold_time", f.hold_time);
  f.path = points_from(j.at("path"));
  return f;
}

json follower_json(const sim::FollowerHuman& f) {
  return {{"type", "follower"},       {"stiffness", f.stiffness}, {"damping", f.damping},
          {"lookahead", f.lookahead}, {"hold_time", f.hold_time}, {"path", points_json(f.path)}};
}

}  // namespace

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(p.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw FormatError("cannot write " + p.string());
  out << text;
}

json point_json(const Point2& p) { return json::array({p.x(), p.y()}); }

Point2 point_from(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.at("y").get<double>(), j.at("z").get<double>()};
  throw FormatError("expected a point as [y, z] or {y, z}");
}

json to_json(const Demonstration& d) {
  json samples = json::array();
  for (const auto& s : d.samples)
    samples.push_back({{"y", s.x.x()}, {"z", s.x.y()}, {"vy", s.v.x()}, {"vz", s.v.y()}});
  return {{"rate_hz", d.rate_hz}, {"samples", samples}};
}

Demonstration demonstration_from_json(const json& j) {
  try {
    Demonstration d;
    d.rate_hz = j.at("rate_hz").get<double>();
    if (!(d.rate_hz > 0.0)) throw FormatError("rate_hz must be positive");
    bool have_vel = true;
    for (const auto& s : j.at("samples")) {
      DemoSample ds;
      ds.x = {s.at("y").get<double>(), s.at("z").get<double>()};
      if (s.contains("vy") && s.contains("vz"))
        ds.v = {s.at("vy").get<double>(), s.at("vz").get<double>()};
      else
        have_vel = false;
      d.samples.push_back(ds);
    }
    if (!have_vel) recompute_velocities(d);
    return d;
  } catch (const json::exception& e) {
    throw FormatError(std::string("demonstration: ") + e.what());
  }
}

std::vector<Demonstration> demonstrations_from_json(const json& j) {
  std::vector<Demonstration> out;
  if (j.is_array()) {
    for (const auto& d : j) out.push_back(demonstration_from_json(d));
  } else {
    out.push_back(demonstration_from_json(j));
  }
  return out;
}

json to_json(const LinearDs& ds, const gp::Model& m) {
  json pts = json::array();
  const auto& xs = m.dataset().inputs();
  const auto& ys = m.dataset().outputs();
  for (std::size_t i = 0; i < xs.size(); ++i)
    pts.push_back({{"y", xs[i].x()}, {"z", xs[i].y()}, {"phi", ys[i].phi}, {"kappa", ys[i].kappa}});
  const auto& h = m.hyper();
  return {{"ds", {{"gain", ds.gain}, {"attractor", {{"y", ds.attractor.x()}, {"z", ds.attractor.y()}}}}},
          {"hyper", {{"gamma_f", h.signal_var}, {"l", h.length_scale}, {"noise_var", h.noise_var}}},
          {"points", pts}};
}

ModelFile model_from_json(const json& j) {
  try {
    ModelFile out;
    if (j.contains("ds")) {
      out.ds.gain = j.at("ds").at("gain").get<double>();
      out.ds.attractor = point_from(j.at("ds").at("attractor"));
    }
    gp::HyperParams h;
    const auto& hj = j.at("hyper");
    h.signal_var = hj.at("gamma_f").get<double>();
    h.length_scale = hj.at("l").get<double>();
    h.noise_var = hj.at("noise_var").get<double>();
    gp::Dataset d;
    for (const auto& p : j.at("points")) {
      const Point2 x{p.at("y").get<double>(), p.at("z").get<double>()};
      if (!d.add(x, {p.at("phi").get<double>(), p.at("kappa").get<double>()}))
        throw FormatError("model contains duplicate inputs");
    }
    out.model = std::make_shared<const gp::Model>(gp::Model::fit(std::move(d), h));
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

sim::HumanSpec human_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "passive") return sim::PassiveHuman{};
  if (type == "follower") return follower_from(j);
  if (type == "escaper") {
    sim::EscaperHuman e;
    get_opt(j, "ramp_rate", e.ramp_rate);
    get_opt(j, "start_time", e.start_time);
    if (j.contains("direction")) e.direction = point_from(j.at("direction"));
    e.after_escape = follower_from(j.at("after_escape"));
    return e;
  }
  if (type == "external") return sim::ExternalHuman{};
  throw FormatError("unknown human policy type '" + type + "'");
}

json to_json(const sim::HumanSpec& h) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, sim::PassiveHuman>) {
          return {{"type", "passive"}};
        } else if constexpr (std::is_same_v<T, sim::FollowerHuman>) {
          return follower_json(v);
        } else if constexpr (std::is_same_v<T, sim::EscaperHuman>) {
          return {{"type", "escaper"},
                  {"ramp_rate", v.ramp_rate},
                  {"start_time", v.start_time},
                  {"direction", point_json(v.direction)},
                  {"after_escape", follower_json(v.after_escape)}};
        } else {
          return {{"type", "external"}};
        }
      },
      h);
}

sim::Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  try {
    sim::Scenario s;
    get_opt(j, "name", s.name);
    const auto& e = j.at("environment");
    if (e.contains("walls"))
      for (const auto& r : e.at("walls")) s.env.walls.push_back(rect_from(r));
    if (e.contains("obstacles"))
      for (const auto& r : e.at("obstacles")) s.env.obstacles.push_back(rect_from(r));
    s.env.goal = point_from(e.at("goal"));
    get_opt(e, "goal_tol", s.env.goal_tol);

    s.start = point_from(j.at("start"));
    if (j.contains("workspace")) {
      get_opt(j.at("workspace"), "beta", s.beta);
      if (j.at("workspace").contains("master_origin")) s.master_origin = point_from(j.at("workspace").at("master_origin"));
    }

    if (j.contains("gp")) {
      auto mf = model_from_json(j.at("gp"));
      s.model = mf.model;
      s.ds = mf.ds;
    } else if (j.contains("model")) {
      auto mf = model_from_json(read_json_file(base_dir / j.at("model").get<std::string>()));
      s.model = mf.model;
      s.ds = mf.ds;
    }
    if (j.contains("ds")) get_opt(j.at("ds"), "gain", s.ds.gain);
    s.ds.attractor = s.env.goal;

    if (j.contains("vsds")) {
      const auto& v = j.at("vsds");
      auto& p = s.guidance.vsds;
      get_opt(v, "spacing", p.spacing);
      get_opt(v, "kernel_ratio", p.kernel_ratio);
      get_opt(v, "tunnel_kernel_ratio", p.tunnel_kernel_ratio);
      if (v.contains("damping")) p.damping = mat_from(v.at("damping"));
      get_opt(v, "ramp_spacings", p.ramp_spacings);
      get_opt(v, "ramp_floor", p.ramp_floor);
    }
    if (j.contains("stiffness_schedule")) {
      const auto& v = j.at("stiffness_schedule");
      auto& p = s.guidance.stiffness;
      get_opt(v, "k_par", p.k_par);
      get_opt(v, "a1", p.a1);
      get_opt(v, "a2", p.a2);
      get_opt(v, "var_low", p.var_low);
      get_opt(v, "var_high", p.var_high);
    }
    if (j.contains("tunnel_schedule")) {
      const auto& v = j.at("tunnel_schedule");
      auto& p = s.guidance.tunnel;
      get_opt(v, "b1", p.b1);
      get_opt(v, "b2", p.b2);
      get_opt(v, "var_low", p.var_low);
      get_opt(v, "var_high", p.var_high);
    }
    if (j.contains("path_integration")) {
      const auto& v = j.at("path_integration");
      get_opt(v, "dt", s.guidance.integration.dt);
      get_opt(v, "goal_tol", s.guidance.integration.goal_tol);
      get_opt(v, "max_steps", s.guidance.integration.max_steps);
    }
    if (j.contains("incremental")) {
      const auto& v = j.at("incremental");
      get_opt(v, "radius", s.incremental.radius);
      get_opt(v, "speed_gap", s.incremental.speed_gap);
      get_opt(v, "angle_gap", s.incremental.angle_gap);
    }
    if (j.contains("flow") && j.at("flow").contains("gain")) s.flow_gain = mat_from(j.at("flow").at("gain"));
    if (j.contains("openloop")) {
      if (j.at("openloop").contains("stiffness")) s.openloop_stiffness = mat_from(j.at("openloop").at("stiffness"));
      if (j.at("openloop").contains("damping")) s.openloop_damping = mat_from(j.at("openloop").at("damping"));
    }
    if (j.contains("controller")) s.controller = sim::controller_from_string(j.at("controller").get<std::string>());
    get_opt(j, "tunnel_gating", s.tunnel_gating);
    if (j.contains("humans"))
      for (const auto& [key, h] : j.at("humans").items()) s.humans[key] = human_from_json(h);
    get_opt(j, "human", s.human);
    get_opt(j, "mass", s.mass);
    get_opt(j, "dt", s.dt);
    get_opt(j, "t_max", s.t_max);
    get_opt(j, "force_cap", s.force_cap);
    get_opt(j, "tremor_std", s.tremor_std);
    get_opt(j, "seed", s.seed);
    get_opt(j, "log_rate_hz", s.log_rate_hz);
    get_opt(j, "escape_window", s.escape_window);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
}

sim::Scenario load_scenario(const std::filesystem::path& p) {
  return scenario_from_json(read_json_file(p), p.parent_path());
}

json to_json(const sim::Scenario& s) {
  json walls = json::array();
  for (const auto& r : s.env.walls) walls.push_back(rect_json(r));
  json obstacles = json::array();
  for (const auto& r : s.env.obstacles) obstacles.push_back(rect_json(r));
  json humans = json::object();
  for (const auto& [k, h] : s.humans) humans[k] = to_json(h);
  const auto& g = s.guidance;
  return {
      {"name", s.name},
      {"environment", {{"walls", walls}, {"obstacles", obstacles}, {"goal", point_json(s.env.goal)}, {"goal_tol", s.env.goal_tol}}},
      {"start", point_json(s.start)},
      {"workspace", {{"beta", s.beta}, {"master_origin", point_json(s.master_origin)}}},
      {"gp", to_json(s.ds, *s.model)},
      {"vsds",
       {{"spacing", g.vsds.spacing},
        {"kernel_ratio", g.vsds.kernel_ratio},
        {"tunnel_kernel_ratio", g.vsds.tunnel_kernel_ratio},
        {"damping", mat_json(g.vsds.damping)},
        {"ramp_spacings", g.vsds.ramp_spacings},
        {"ramp_floor", g.vsds.ramp_floor}}},
      {"stiffness_schedule",
       {{"k_par", g.stiffness.k_par},
        {"a1", g.stiffness.a1},
        {"a2", g.stiffness.a2},
        {"var_low", g.stiffness.var_low},
        {"var_high", g.stiffness.var_high}}},
      {"tunnel_schedule",
       {{"b1", g.tunnel.b1}, {"b2", g.tunnel.b2}, {"var_low", g.tunnel.var_low}, {"var_high", g.tunnel.var_high}}},
      {"path_integration",
       {{"dt", g.integration.dt}, {"goal_tol", g.integration.goal_tol}, {"max_steps", g.integration.max_steps}}},
      {"incremental",
       {{"radius", s.incremental.radius}, {"speed_gap", s.incremental.speed_gap}, {"angle_gap", s.incremental.angle_gap}}},
      {"flow", {{"gain", mat_json(s.flow_gain)}}},
      {"openloop", {{"stiffness", mat_json(s.openloop_stiffness)}, {"damping", mat_json(s.openloop_damping)}}},
      {"controller", sim::to_string(s.controller)},
      {"tunnel_gating", s.tunnel_gating},
      {"human", s.human},
      {"humans", humans},
      {"mass", s.mass},
      {"dt", s.dt},
      {"t_max", s.t_max},
      {"force_cap", s.force_cap},
      {"tremor_std", s.tremor_std},
      {"seed", s.seed},
      {"log_rate_hz", s.log_rate_hz},
      {"escape_window", s.escape_window},
  };
}

json to_json(const sim::LogRecord& r) {
  return {{"t", r.t},
          {"x_m", point_json(r.x_m)},
          {"v_m", point_json(r.v_m)},
          {"x_r", point_json(r.x_r)},
          {"u_c", point_json(r.u_c)},
          {"u_h", point_json(r.u_h)},
          {"omega_max", r.omega_max},
          {"mode", r.mode}};
}

json to_json(const sim::TrialMetrics& m) {
  return {{"success", m.success},
          {"collision", m.collision},
          {"timeout", m.timeout},
          {"execution_time", m.execution_time},
          {"mean_squared_jerk", m.mean_squared_jerk},
          {"escaped", m.escaped},
          {"escape_time", m.escape_time},
          {"peak_escape_force", m.peak_escape_force},
          {"peak_control_force", m.peak_control_force},
          {"max_kinetic_energy", m.max_kinetic_energy}};
}

std::string log_to_jsonl(const std::vector<sim::LogRecord>& log) {
  std::ostringstream out;
  for (const auto& r : log) out << to_json(r).dump() << '\n';
  return out.str();
}

}  // namespace vsds::io
