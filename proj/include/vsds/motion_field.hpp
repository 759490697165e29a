#pragma once

#include <vector>

#include "vsds/gp.hpp"
#include "vsds/types.hpp"

namespace vsds {

/// x_dot = -gain * (x - attractor). Globally asymptotically stable for gain > 0.
struct LinearDs {
  double gain = 0.4;
  Point2 attractor = Point2::Zero();

  [[nodiscard]] Vel2 operator()(const Point2& x) const { return -gain * (x - attractor); }
};

[[nodiscard]] Vel2 eval_linear_ds(const LinearDs& ds, const Point2& x);

[[nodiscard]] Mat2 rotation_matrix(double phi);

/// (1 + kappa) R(phi). Throws KappaOutOfRange for kappa <= -1.
[[nodiscard]] Mat2 modulation_matrix(const ModulationParams& p);

/// Limits applied when converting demonstrations and when evaluating the
/// reshaped field.
struct ModulationLimits {
  double speed_floor = 1e-4;  // m/s
  double kappa_min = -0.95;
  double kappa_max = 9.0;
};

/// Inverts x_dot = (1 + kappa) R(phi) f_o(x) for one demonstration sample.
/// Throws DegenerateSample if either velocity is below the speed floor.
[[nodiscard]] ModulationParams demo_to_modulation(const Point2& x, const Vel2& v_demo, const LinearDs& ds,
                                                  const ModulationLimits& lim = {});

/// Linear DS locally rotated and scaled by the regressed modulation field.
class ReshapedDs {
 public:
  ReshapedDs(LinearDs base, gp::ModelPtr regressor, ModulationLimits lim = {});

  /// Modulation at x: predictive means with kappa clamped to the limits.
  [[nodiscard]] ModulationParams modulation(const Point2& x) const;

  [[nodiscard]] Vel2 operator()(const Point2& x) const;

  [[nodiscard]] const LinearDs& base() const { return base_; }
  [[nodiscard]] const gp::Model& regressor() const { return *regressor_; }
  [[nodiscard]] const gp::ModelPtr& regressor_ptr() const { return regressor_; }
  [[nodiscard]] const ModulationLimits& limits() const { return lim_; }

 private:
  LinearDs base_;
  gp::ModelPtr regressor_;
  ModulationLimits lim_;
};

[[nodiscard]] Vel2 eval_reshaped_ds(const ReshapedDs& f, const Point2& x);

struct ReferencePath {
  std::vector<Point2> points;
  Point2 goal = Point2::Zero();

  [[nodiscard]] double length() const;
};

struct PathIntegration {
  double dt = 1e-3;
  double goal_tol = 0.01;
  std::size_t max_steps = 100000;
};

/// Forward-Euler rollout of `f` from x0 until the goal tolerance is entered.
/// The final point is snapped to the attractor. Throws NoConvergence when
/// max_steps is exhausted.
[[nodiscard]] ReferencePath integrate_reference_path(const ReshapedDs& f, const Point2& x0,
                                                     const PathIntegration& opt = {});

}  // namespace vsds
