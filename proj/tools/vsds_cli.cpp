#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vsds/errors.hpp"
#include "vsds/field_export.hpp"
#include "vsds/io.hpp"
#include "vsds/server.hpp"
#include "vsds/session.hpp"
#include "vsds/trial.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

vsds::Point2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw vsds::InvalidArgument("expected a point as y,z");
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw vsds::InvalidArgument("expected a point as y,z");
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    vsds::io::write_text_file(path, text);
}

json metrics_row(const std::string& scenario, const std::string& controller, const std::string& human,
                 const vsds::sim::TrialMetrics& m) {
  json row = vsds::io::to_json(m);
  row["scenario"] = scenario;
  row["controller"] = controller;
  row["human"] = human;
  return row;
}

std::string csv_table(const json& rows) {
  static const char* cols[] = {"scenario",          "controller",        "human",     "success",
                               "collision",         "timeout",           "execution_time",
                               "mean_squared_jerk", "escaped",           "escape_time",
                               "peak_escape_force", "peak_control_force", "max_kinetic_energy"};
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < std::size(cols); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) out << ',';
      const auto& v = r.at(cols[i]);
      if (v.is_string())
        out << v.get<std::string>();
      else if (v.is_boolean())
        out << (v.get<bool>() ? "true" : "false");
      else
        out << v.get<double>();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-control workbench: learned motion fields with variable-stiffness haptic guidance"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "Fit a modulation model from demonstrations");
  std::string demos_path, model_out;
  double gain = 0.4;
  std::string goal_text;
  learn->add_option("demos", demos_path, "Demonstration JSON (object or array)")->required()->check(CLI::ExistingFile);
  learn->add_option("--model", model_out, "Output model file (stdout if omitted)");
  learn->add_option("--gain", gain, "Linear DS gain")->check(CLI::PositiveNumber);
  learn->add_option("--goal", goal_text, "Attractor as y,z (default: last sample of the first demo)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop trial");
  std::string scenario_path, controller, human, log_out, metrics_out;
  bool as_session = false;
  simulate->add_option("scenario", scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--controller", controller, "vsds|flow|openloop|free (default: scenario)");
  simulate->add_option("--human", human, "Human policy key in the scenario (default: scenario)");
  simulate->add_option("--log", log_out, "Trajectory log (JSON lines)");
  simulate->add_option("--metrics", metrics_out, "Metrics JSON (stdout if omitted)");
  simulate->add_flag("--session", as_session, "Run through the live session state machine, learning included");

  // batch
  auto* batch = app.add_subcommand("batch", "Run every scenario in a directory");
  std::string batch_dir, batch_format = "csv", batch_out;
  std::vector<std::string> batch_controllers;
  batch->add_option("dir", batch_dir, "Directory of scenario JSON files")->required()->check(CLI::ExistingDirectory);
  batch->add_option("--format", batch_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  batch->add_option("--controllers", batch_controllers, "Controllers to sweep (default: each scenario's own)");
  batch->add_option("--out", batch_out, "Output file (stdout if omitted)");

  // export-field
  auto* exportf = app.add_subcommand("export-field", "Sample the learned field and guidance on a grid");
  std::string ef_model, ef_grid, ef_start, ef_out, ef_scenario;
  double ef_beta = 0.2;
  exportf->add_option("model", ef_model, "Model JSON")->required()->check(CLI::ExistingFile);
  exportf->add_option("grid", ef_grid, "ymin:ymax:ny,zmin:zmax:nz")->required();
  exportf->add_option("--start", ef_start, "Build guidance from this remote start (y,z)");
  exportf->add_option("--beta", ef_beta, "Master/remote scale")->check(CLI::PositiveNumber);
  exportf->add_option("--scenario", ef_scenario, "Take guidance parameters from a scenario")->check(CLI::ExistingFile);
  exportf->add_option("--out", ef_out, "Output file (stdout if omitted)");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve a live session over WebSocket");
  unsigned short port = 8765;
  std::string address = "127.0.0.1", data_dir = "data", serve_scenario = "scenarios/near_demo.json";
  std::string serve_grid;
  double time_scale = 1.0;
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--address", address, "Bind address");
  serve->add_option("--data-dir", data_dir, "Directory scenarios resolve against")->check(CLI::ExistingDirectory);
  serve->add_option("--scenario", serve_scenario, "Initial scenario, relative to the data directory");
  serve->add_option("--grid", serve_grid, "Field grid ymin:ymax:ny,zmin:zmax:nz (default: environment bounds)");
  serve->add_option("--time-scale", time_scale, "Wall seconds per simulated second (0: unthrottled)")
      ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*learn) {
      const auto demos = vsds::io::demonstrations_from_json(vsds::io::read_json_file(demos_path));
      vsds::LinearDs ds;
      ds.gain = gain;
      if (!goal_text.empty()) {
        ds.attractor = parse_point(goal_text);
      } else {
        if (demos.empty() || demos.front().samples.empty()) throw vsds::InvalidArgument("no demonstration samples");
        ds.attractor = demos.front().samples.back().x;
      }
      auto data = vsds::dataset_from_demos(demos, ds);
      const auto model = vsds::gp::Model::fit(std::move(data), {});
      emit(vsds::io::to_json(ds, model).dump(2) + "\n", model_out);
      std::cerr << "stored " << model.dataset().size() << " points\n";
      return 0;
    }

    if (*simulate) {
      auto sc = vsds::io::load_scenario(scenario_path);
      const auto kind = controller.empty() ? sc.controller : vsds::sim::controller_from_string(controller);
      const std::string hkey = human.empty() ? sc.human : human;
      const auto& hspec = sc.human_spec(hkey);
      json metrics;
      std::string log_text;
      if (as_session) {
        if (kind != vsds::sim::ControllerKind::Vsds) throw vsds::InvalidArgument("--session requires the vsds controller");
        const auto run = vsds::session::run_script(sc, hspec);
        json events = json::array();
        for (const auto& e : run.events) events.push_back({{"name", e.name}, {"t", e.t}, {"value", e.value}});
        json modes = json::array();
        for (auto m : run.modes) modes.push_back(vsds::session::to_string(m));
        metrics = {{"scenario", sc.name},   {"human", hkey},
                   {"events", events},     {"modes", modes},
                   {"t_end", run.t_end},   {"chain_builds", run.builds.size()},
                   {"points", run.model->dataset().size()},
                   {"update", {{"removed", run.update.removed}, {"added", run.update.added}, {"skipped", run.update.skipped}}}};
        log_text = vsds::io::log_to_jsonl(run.log);
      } else {
        const auto res = vsds::sim::run_trial(sc, kind, hspec);
        metrics = metrics_row(sc.name, vsds::sim::to_string(kind), hkey, res.metrics);
        log_text = vsds::io::log_to_jsonl(res.log);
      }
      if (!log_out.empty()) vsds::io::write_text_file(log_out, log_text);
      emit(metrics.dump(2) + "\n", metrics_out);
      return 0;
    }

    if (*batch) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(batch_dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      json rows = json::array();
      for (const auto& f : files) {
        const auto sc = vsds::io::load_scenario(f);
        std::vector<vsds::sim::ControllerKind> kinds;
        if (batch_controllers.empty())
          kinds.push_back(sc.controller);
        else
          for (const auto& c : batch_controllers) kinds.push_back(vsds::sim::controller_from_string(c));
        for (auto k : kinds) {
          const auto res = vsds::sim::run_trial(sc, k, sc.human_spec(sc.human));
          rows.push_back(metrics_row(sc.name, vsds::sim::to_string(k), sc.human, res.metrics));
        }
      }
      emit(batch_format == "csv" ? csv_table(rows) : rows.dump(2) + "\n", batch_out);
      return 0;
    }

    if (*exportf) {
      const auto mf = vsds::io::model_from_json(vsds::io::read_json_file(ef_model));
      vsds::GuidanceConfig cfg;
      if (!ef_scenario.empty()) cfg = vsds::io::load_scenario(ef_scenario).guidance;
      const vsds::ReshapedDs field(mf.ds, mf.model, cfg.limits);
      const auto grid = vsds::GridSpec::parse(ef_grid);
      std::optional<vsds::GuidancePlan> plan;
      vsds::WorkspaceMap map{ef_beta, vsds::Point2::Zero(), vsds::Point2::Zero()};
      if (!ef_start.empty()) {
        const auto start = parse_point(ef_start);
        map.remote_origin = start;
        plan = vsds::plan_guidance(field, start, map, cfg);
      }
      emit(vsds::to_json(vsds::export_field(field, plan, map, cfg.vsds, grid)).dump() + "\n", ef_out);
      return 0;
    }

    if (*serve) {
      const fs::path dir(data_dir);
      auto sc = vsds::io::load_scenario(dir / serve_scenario);
      vsds::GridSpec grid;
      if (!serve_grid.empty()) {
        grid = vsds::GridSpec::parse(serve_grid);
      } else {
        vsds::Point2 lo = sc.env.goal, hi = sc.env.goal;
        auto grow = [&](const vsds::Point2& p) {
          lo = lo.cwiseMin(p);
          hi = hi.cwiseMax(p);
        };
        grow(sc.start);
        for (const auto& r : sc.env.walls) {
          grow(r.min);
          grow(r.max);
        }
        grid = {lo.x(), hi.x(), 41, lo.y(), hi.y(), 41};
      }
      auto host = std::make_shared<vsds::server::Host>(std::move(sc), grid, dir);
      vsds::server::Server server(host, {address, port, time_scale});
      const auto bound = server.start();
      std::cerr << "listening on ws://" << address << ":" << bound << "\n";
      server.wait();
      server.stop();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
