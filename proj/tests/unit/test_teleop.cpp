#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vsds/errors.hpp"
#include "vsds/human.hpp"
#include "vsds/io.hpp"
#include "vsds/teleop.hpp"
#include "vsds/trial.hpp"

using namespace vsds;
using namespace vsds::sim;

namespace {

Scenario near_demo() { return io::load_scenario(testing::data_dir() / "scenarios/near_demo.json"); }

}  // namespace

TEST_CASE("master dynamics track the damped oscillator") {
  // m x'' = -k x - d v with m = 1, k = 100, d = 4: underdamped.
  const double k = 100.0, d = 4.0, dt = 1e-5;
  const double zeta_w = d / 2.0, wd = std::sqrt(k - zeta_w * zeta_w);
  const double x0 = 0.1, v0 = 0.0;
  MasterState s;
  s.x = {x0, 0.0};
  s.v = {v0, 0.0};
  for (int i = 0; i < 100000; ++i) s = step_master(s, -k * s.x - d * s.v, Force2::Zero(), 1.0, dt);
  const double t = s.t;
  const double exact =
      std::exp(-zeta_w * t) * (x0 * std::cos(wd * t) + (v0 + zeta_w * x0) / wd * std::sin(wd * t));
  CHECK(t == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(s.x.x() - exact) < 1e-4);
  CHECK(s.x.y() == 0.0);
  CHECK_THROWS_AS((void)step_master(s, Force2::Zero(), Force2::Zero(), 0.0, dt), InvalidArgument);
}

TEST_CASE("workspace map round-trips") {
  const WorkspaceMap w{0.2, {0.05, -0.02}, {-0.44, 0.3}};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point2 x(u(rng), u(rng));
    CHECK((w.to_remote(w.to_master(x)) - x).norm() < 1e-12);
    CHECK((map_master_to_remote(w, map_remote_to_master(w, x)) - x).norm() < 1e-12);
  }
  CHECK(w.to_master({-0.44, 0.3}) == Point2(0.05, -0.02));
}

TEST_CASE("jerk of a cubic is its constant third derivative") {
  const double dt = 1e-3;
  std::vector<Point2> xs;
  for (int k = 0; k < 500; ++k) {
    const double t = k * dt;
    xs.emplace_back(t * t * t, 2.0 * t * t * t - t);
  }
  // j = (6, 12), |j|^2 = 180.
  CHECK(mean_squared_jerk(xs, dt) == doctest::Approx(180.0).epsilon(0.01));
  CHECK(mean_squared_jerk(std::vector<Point2>(4, Point2::Zero()), dt) == 0.0);
}

TEST_CASE("segment rectangle intersection") {
  const Rect r{{0.0, 0.0}, {1.0, 1.0}};
  CHECK(segment_hits_rect({-1.0, 0.5}, {2.0, 0.5}, r));
  CHECK(segment_hits_rect({0.5, 0.5}, {0.5, 0.5}, r));
  CHECK(segment_hits_rect({-1.0, 1.0}, {0.0, 2.0}, r) == false);
  CHECK(segment_hits_rect({-1.0, 0.0}, {1.0, 2.0}, r));
  CHECK(segment_hits_rect({1.0, 1.0}, {2.0, 2.0}, r));
  CHECK_FALSE(segment_hits_rect({1.1, -1.0}, {1.1, 2.0}, r));

  Environment env;
  env.obstacles.push_back(r);
  env.goal = {2.0, 2.0};
  const std::vector<Point2> poly{{-1.0, -1.0}, {-1.0, 2.0}, {0.5, 2.0}, {0.5, 0.9}};
  CHECK(polyline_collides(env, poly));
  CHECK_FALSE(polyline_collides(env, std::span(poly.data(), 3)));
}

TEST_CASE("timed trajectory interpolates and clamps") {
  TimedTrajectory tr{0.5, {{0.0, 0.0}, {1.0, 0.0}, {1.0, 2.0}}};
  CHECK(tr.at(-1.0) == Point2(0.0, 0.0));
  CHECK(tr.at(0.25) == Point2(0.5, 0.0));
  CHECK(tr.at(0.75) == Point2(1.0, 1.0));
  CHECK(tr.at(5.0) == Point2(1.0, 2.0));
  CHECK(tr.duration() == 1.0);
  const Mat2 k = 10.0 * Mat2::Identity(), d = 2.0 * Mat2::Identity();
  CHECK(openloop_impedance_controller(0.25, {0.0, 0.0}, {1.0, 0.0}, tr, k, d) == Force2(3.0, 0.0));
  CHECK(flow_controller({1.0, 1.0}, {0.0, 1.0}, k) == Force2(10.0, 0.0));
}

TEST_CASE("human policies") {
  const WorkspaceMap map{0.2, Point2::Zero(), Point2::Zero()};
  MasterState s;

  HumanPolicy passive(PassiveHuman{}, map);
  CHECK(passive.force(s, false) == Force2::Zero());

  FollowerHuman f;
  f.path = {{0.0, 0.0}, {1.0, 0.0}};
  f.stiffness = 1e6;
  HumanPolicy follower(f, map, 30.0);
  CHECK(follower.force(s, false).norm() == doctest::Approx(30.0));

  f.hold_time = 1.0;
  f.stiffness = 100.0;
  HumanPolicy holder(f, map);
  (void)holder.force(s, false);
  s.x = {0.01, 0.0};
  s.t = 0.5;
  CHECK((holder.force(s, false) - Force2(-1.0, 0.0)).norm() < 1e-12);

  EscaperHuman e;
  e.ramp_rate = 20.0;
  e.start_time = 0.2;
  e.direction = {0.0, 2.0};
  e.after_escape.path = {{0.0, 0.0}};
  HumanPolicy esc(e, map);
  s.t = 0.1;
  CHECK(esc.force(s, false) == Force2::Zero());
  s.t = 1.7;
  CHECK((esc.force(s, false) - Force2(0.0, 30.0)).norm() < 1e-12);
  s.t = 10.0;
  CHECK(esc.force(s, false).norm() > 30.0);

  ExternalHuman ext;
  ext.slot->set({1.0, -2.0});
  HumanPolicy ex(ext, map);
  CHECK(ex.force(s, false) == Force2(1.0, -2.0));

  FollowerHuman bad;
  CHECK_THROWS_AS(HumanPolicy(bad, map), InvalidArgument);
}

TEST_CASE("log decimation") {
  std::size_t n = 0;
  for (std::size_t k = 0; k <= 1000; ++k) n += log_tick(k, 1e-3, 60.0) ? 1 : 0;
  CHECK(n == 61);
}

TEST_CASE("passive VSDS trial succeeds and agrees with a post-hoc check") {
  const auto sc = near_demo();
  const auto r = run_trial(sc, ControllerKind::Vsds, PassiveHuman{});
  CHECK(r.metrics.success);
  CHECK_FALSE(r.metrics.collision);
  CHECK_FALSE(r.metrics.escaped);

  const bool reached = (r.remote_path.back() - sc.env.goal).norm() < sc.env.goal_tol;
  CHECK(reached == r.metrics.success);
  CHECK(polyline_collides(sc.env, r.remote_path) == r.metrics.collision);
  for (std::size_t i = 0; i + 1 < r.remote_path.size(); ++i)
    CHECK_FALSE((r.remote_path[i] - sc.env.goal).norm() < sc.env.goal_tol);

  // Kinetic energy stays below the elastic energy of the stiffest spring
  // stretched over the whole chain.
  const auto& c = r.plan->chain;
  double len = 0.0, k_max = 0.0;
  for (std::size_t i = 1; i < c.attractors().size(); ++i) len += (c.attractors()[i] - c.attractors()[i - 1]).norm();
  for (const auto& k : c.stiffness()) k_max = std::max({k_max, k.k_par, k.k_perp});
  CHECK(r.metrics.max_kinetic_energy < 0.5 * k_max * len * len);
}

TEST_CASE("trials are deterministic") {
  auto sc = near_demo();
  sc.tremor_std = 0.5;
  const auto& h = sc.human_spec("follower");
  const auto a = run_trial(sc, ControllerKind::Vsds, h);
  const auto b = run_trial(sc, ControllerKind::Vsds, h);
  CHECK(io::log_to_jsonl(a.log) == io::log_to_jsonl(b.log));
  sc.seed += 1;
  const auto c = run_trial(sc, ControllerKind::Vsds, h);
  CHECK(io::log_to_jsonl(a.log) != io::log_to_jsonl(c.log));
}

TEST_CASE("timeouts are reported, not thrown") {
  auto sc = near_demo();
  sc.t_max = 0.05;
  const auto r = run_trial(sc, ControllerKind::Free, PassiveHuman{});
  CHECK(r.metrics.timeout);
  CHECK_FALSE(r.metrics.success);
}

TEST_CASE("scenario validation") {
  auto sc = near_demo();
  sc.ds.attractor = {1.0, 1.0};
  CHECK_THROWS_AS(sc.validate(), InvalidArgument);
  CHECK_THROWS_AS((void)near_demo().human_spec("nobody"), InvalidArgument);
  CHECK_THROWS_AS((void)controller_from_string("pid"), InvalidArgument);
  CHECK(controller_from_string(to_string(ControllerKind::OpenLoop)) == ControllerKind::OpenLoop);
}
