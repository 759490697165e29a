#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsds/gp.hpp"
#include "vsds/learning.hpp"
#include "vsds/scenario.hpp"
#include "vsds/trial.hpp"

// JSON encodings of demonstrations, regression models, scenarios and trial
// outputs. Doubles are written with round-trip precision.
namespace vsds::io {

using json = nlohmann::json;

[[nodiscard]] json read_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);

// Demonstration: {rate_hz, samples: [{y, z, vy, vz}]}. Velocities are
// recomputed by central differences when any sample lacks vy or vz.
[[nodiscard]] json to_json(const Demonstration& d);
[[nodiscard]] Demonstration demonstration_from_json(const json& j);
/// Accepts a single demonstration object or an array of them.
[[nodiscard]] std::vector<Demonstration> demonstrations_from_json(const json& j);

// Model: {ds: {gain, attractor: {y, z}}, hyper: {gamma_f, l, noise_var},
// points: [{y, z, phi, kappa}]}. Points keep their stored order, which fixes
// the summation order of the predictive mean.
struct ModelFile {
  LinearDs ds;
  gp::ModelPtr model;
};
[[nodiscard]] json to_json(const LinearDs& ds, const gp::Model& m);
[[nodiscard]] ModelFile model_from_json(const json& j);

[[nodiscard]] json point_json(const Point2& p);  // [y, z]
[[nodiscard]] Point2 point_from(const json& j);  // [y, z] or {y, z}

/// Model paths inside a scenario resolve relative to `base_dir`.
[[nodiscard]] sim::Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir);
[[nodiscard]] sim::Scenario load_scenario(const std::filesystem::path& p);
/// Inline encoding (the model is embedded under "gp").
[[nodiscard]] json to_json(const sim::Scenario& s);

[[nodiscard]] sim::HumanSpec human_from_json(const json& j);
[[nodiscard]] json to_json(const sim::HumanSpec& h);

[[nodiscard]] json to_json(const sim::LogRecord& r);
[[nodiscard]] json to_json(const sim::TrialMetrics& m);
/// One JSON document per line.
[[nodiscard]] std::string log_to_jsonl(const std::vector<sim::LogRecord>& log);

}  // namespace vsds::io
