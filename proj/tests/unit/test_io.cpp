#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vsds/errors.hpp"
#include "vsds/io.hpp"

using namespace vsds;
using io::json;

TEST_CASE("demonstrations round-trip bit for bit") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Demonstration d;
  d.rate_hz = 60.0;
  for (int i = 0; i < 50; ++i) d.samples.push_back({{u(rng), u(rng)}, {u(rng) * 1e-7, u(rng) / 3.0}});
  const auto back = io::demonstration_from_json(json::parse(io::to_json(d).dump()));
  CHECK(back == d);
  const auto many = io::demonstrations_from_json(json::array({io::to_json(d), io::to_json(d)}));
  CHECK(many.size() == 2);
}

TEST_CASE("missing velocities are recomputed") {
  const json j = {{"rate_hz", 10.0},
                  {"samples", json::array({{{"y", 0.0}, {"z", 0.0}}, {{"y", 0.1}, {"z", 0.0}}, {{"y", 0.3}, {"z", 0.0}}})}};
  const auto d = io::demonstration_from_json(j);
  CHECK(d.samples[1].v.x() == doctest::Approx(1.5));
}

TEST_CASE("models round-trip with identical predictions") {
  const auto file = io::model_from_json(io::read_json_file(testing::data_dir() / "models/box_model.json"));
  const auto again = io::model_from_json(json::parse(io::to_json(file.ds, *file.model).dump()));
  CHECK(again.model->dataset() == file.model->dataset());
  CHECK(again.ds.gain == file.ds.gain);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> y(-0.5, 0.2), z(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    const Point2 x(y(rng), z(rng));
    const auto a = file.model->predict(x);
    const auto b = again.model->predict(x);
    CHECK(a.mean.phi == b.mean.phi);
    CHECK(a.mean.kappa == b.mean.kappa);
    CHECK(a.variance == b.variance);
  }
}

TEST_CASE("scenarios round-trip through the inline encoding") {
  for (const char* name : {"near_demo", "far_feasible", "case1_far_start", "case2_obstacle"}) {
    const auto sc = io::load_scenario(testing::data_dir() / "scenarios" / (std::string(name) + ".json"));
    const json once = io::to_json(sc);
    const auto back = io::scenario_from_json(json::parse(once.dump()), testing::data_dir());
    CHECK(io::to_json(back).dump() == once.dump());
    CHECK(back.humans.size() == sc.humans.size());
  }
}

TEST_CASE("human specs round-trip") {
  sim::FollowerHuman f;
  f.path = {{0.0, 0.1}, {0.2, 0.3}};
  f.hold_time = 3.0;
  sim::EscaperHuman e;
  e.direction = {-0.6, 0.8};
  e.after_escape = f;
  for (const sim::HumanSpec& h : std::vector<sim::HumanSpec>{sim::PassiveHuman{}, f, e, sim::ExternalHuman{}}) {
    const json j = io::to_json(h);
    CHECK(io::to_json(io::human_from_json(j)) == j);
  }
  CHECK_THROWS_AS((void)io::human_from_json(json{{"type", "robot"}}), FormatError);
}

TEST_CASE("points accept arrays and objects") {
  CHECK(io::point_from(json::array({0.1, 0.2})) == Point2(0.1, 0.2));
  CHECK(io::point_from(json{{"y", 0.1}, {"z", 0.2}}) == Point2(0.1, 0.2));
  CHECK_THROWS_AS((void)io::point_from(json::array({0.1})), FormatError);
  CHECK_THROWS_AS((void)io::point_from(json("0.1,0.2")), FormatError);
}

TEST_CASE("bad files raise format errors") {
  CHECK_THROWS_AS((void)io::read_json_file(testing::data_dir() / "no_such_file.json"), FormatError);
  CHECK_THROWS_AS((void)io::model_from_json(json{{"points", 3}}), FormatError);
  json sc = io::read_json_file(testing::data_dir() / "scenarios/near_demo.json");
  sc["controller"] = "pid";
  CHECK_THROWS_AS((void)io::scenario_from_json(sc, testing::data_dir() / "scenarios"), Error);
}

TEST_CASE("log lines are one JSON document each") {
  sim::LogRecord r;
  r.t = 0.5;
  r.mode = "guided";
  const auto text = io::log_to_jsonl({r, r});
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  const auto first = json::parse(text.substr(0, text.find('\n')));
  CHECK(first["t"] == 0.5);
  CHECK(first["mode"] == "guided");
}
