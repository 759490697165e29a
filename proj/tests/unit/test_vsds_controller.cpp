#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "oracles.hpp"
#include "vsds/errors.hpp"
#include "vsds/guidance.hpp"
#include "vsds/io.hpp"
#include "vsds/vsds_controller.hpp"

using namespace vsds;

namespace {

ReshapedDs box_field() {
  const auto file = io::model_from_json(io::read_json_file(testing::data_dir() / "models/box_model.json"));
  return ReshapedDs(file.ds, file.model);
}

AttractorChain straight_chain(std::size_t n, double spacing, double k_perp = 1800.0) {
  std::vector<Point2> xs;
  for (std::size_t i = 0; i <= n; ++i) xs.emplace_back(spacing * static_cast<double>(i), 0.0);
  const std::vector<Vel2> dirs(n, Vel2(1.0, 0.0));
  const std::vector<authority::AxisStiffness> k(n, {250.0, k_perp});
  return AttractorChain::build(xs, dirs, k, WorkspaceMap{1.0, Point2::Zero(), Point2::Zero()}, 0.5, 1.0, 0.5 * spacing);
}

}  // namespace

TEST_CASE("attractors are equally spaced along the arc") {
  // Quarter circle of radius 0.5, densely sampled.
  ReferencePath p;
  for (int k = 0; k <= 2000; ++k) {
    const double a = kPi / 2.0 * k / 2000.0;
    p.points.emplace_back(0.5 * std::cos(a), 0.5 * std::sin(a));
  }
  p.goal = p.points.back();
  const double arc = kPi / 4.0;
  const auto xs = sample_attractors(p, 0.04);
  REQUIRE(xs.size() == static_cast<std::size_t>(std::llround(arc / 0.04)) + 1);
  const double step = arc / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(xs[i].norm() == doctest::Approx(0.5).epsilon(1e-6));
    const double angle = std::atan2(xs[i].y(), xs[i].x());
    CHECK(0.5 * angle == doctest::Approx(step * static_cast<double>(i)).epsilon(1e-5));
  }
}

TEST_CASE("short paths are rejected") {
  ReferencePath p;
  p.points = {{0.0, 0.0}, {0.01, 0.0}};
  p.goal = p.points.back();
  CHECK_THROWS_AS((void)sample_attractors(p, 0.04), PathTooShort);
}

TEST_CASE("stiffness frames have the requested eigen-structure") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> a(-kPi, kPi), k(100.0, 2000.0);
  for (int i = 0; i < 200; ++i) {
    const double kp = k(rng), kq = k(rng);
    const Vel2 d(std::cos(a(rng)), std::sin(a(rng)));
    const Mat2 m = build_stiffness_frame(kp, kq, d);
    CHECK((m - m.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat2> es(m);
    const double lo = std::min(-kp, -kq), hi = std::max(-kp, -kq);
    CHECK(std::abs(es.eigenvalues()(0) - lo) < 1e-9);
    CHECK(std::abs(es.eigenvalues()(1) - hi) < 1e-9);
    CHECK(((m * d) + kp * d).norm() < 1e-9);
  }
}

TEST_CASE("normalized weights sum to one") {
  const auto chain = straight_chain(10, 0.01);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> y(-0.05, 0.15), z(-0.1, 0.1);
  for (int i = 0; i < 500; ++i) {
    const auto w = weights(chain, {y(rng), z(rng)});
    double sum = 0.0;
    for (double v : w.normalized) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  // Far enough that every kernel underflows: all weight on the nearest system.
  const auto w = weights(chain, {10.0, 0.0});
  CHECK(w.normalized.back() == 1.0);
}

TEST_CASE("tunnel Inside region shrinks as the threshold rises") {
  const auto chain = straight_chain(10, 0.01);
  for (double y = -0.02; y <= 0.12; y += 0.002)
    for (double z = -0.04; z <= 0.04; z += 0.002) {
      bool prev_inside = true;
      for (double th = 0.05; th < 1.0; th += 0.05) {
        const bool inside = tunnel_check(chain, th, {y, z}) == TunnelState::Inside;
        CHECK((!inside || prev_inside));
        prev_inside = inside;
      }
    }
}

TEST_CASE("tunnel activation decays with perpendicular distance") {
  const auto chain = straight_chain(10, 0.01);
  const double eps = chain.tunnel_widths()[0];
  CHECK(eps == doctest::Approx(0.01));
  const Point2 c = chain.centers()[4];
  CHECK(tunnel_activation(chain, c) == doctest::Approx(1.0));
  CHECK(tunnel_activation(chain, c + Point2(0.0, eps)) == doctest::Approx(std::exp(-0.5)));
  CHECK(tunnel_activation(chain, c + Point2(0.0, 2 * eps)) < tunnel_activation(chain, c + Point2(0.0, eps)));
}

TEST_CASE("alpha ramp rises smoothly from the floor") {
  CHECK(alpha_ramp({0.0, 0.0}, {0.0, 0.0}, 0.1, 0.2) == 0.2);
  CHECK(alpha_ramp({0.05, 0.0}, {0.0, 0.0}, 0.1, 0.2) == doctest::Approx(0.6));
  CHECK(alpha_ramp({0.5, 0.0}, {0.0, 0.0}, 0.1, 0.2) == 1.0);
}

TEST_CASE("control force on a single system is the spring toward its attractor") {
  const auto chain = straight_chain(1, 0.04);
  VsdsParams p;
  p.ramp_floor = 1.0;
  const Point2 x(0.01, 0.002);
  const Vel2 v(0.1, -0.2);
  const Force2 u = control_force(chain, p, x, v, chain.start());
  const Force2 expect(-250.0 * (0.01 - 0.04) - 25.0 * 0.1, -1800.0 * 0.002 - 25.0 * -0.2);
  CHECK((u - expect).norm() < 1e-9);
}

TEST_CASE("on-path quasi-static force points forward") {
  const auto field = box_field();
  const WorkspaceMap map{0.2, Point2::Zero(), {-0.44, 0.30}};
  const GuidanceConfig cfg;
  const auto plan = plan_guidance(field, {-0.44, 0.30}, map, cfg);
  const auto& c = plan.chain;
  for (std::size_t i = 1; i < c.attractors().size(); ++i)
    for (double t : {0.25, 0.5, 0.75}) {
      const Point2 x = c.attractors()[i - 1] + t * (c.attractors()[i] - c.attractors()[i - 1]);
      const Force2 u = control_force(c, cfg.vsds, x, Vel2::Zero(), c.start());
      CHECK(u.dot(c.directions()[i - 1]) > 0.0);
    }
}

TEST_CASE("invalid parameters are rejected") {
  VsdsParams p;
  p.damping(0, 1) = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.kernel_ratio = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  CHECK_THROWS_AS((void)build_stiffness_frame(0.0, 1.0, {1.0, 0.0}), InvalidArgument);
}
