#pragma once

#include <span>
#include <vector>

#include "vsds/gp.hpp"
#include "vsds/types.hpp"

// Variance-driven authority allocation: GP uncertainty softens the
// perpendicular stiffness and narrows the guidance tunnel.
namespace vsds::authority {

struct StiffnessSchedule {
  double k_par = 250.0;   // N/m along the motion
  double a1 = 1100.0;     // N/m
  double a2 = 700.0;      // N/m
  double var_low = 0.0;
  double var_high = 0.85;

  void validate() const;
};

struct TunnelSchedule {
  double b1 = 0.45;
  double b2 = 0.35;
  double var_low = 0.0;
  double var_high = 0.85;

  void validate() const;
};

struct AxisStiffness {
  double k_par = 0.0;
  double k_perp = 0.0;
};

/// Perpendicular stiffness: a1 + a2 below var_low, a1 - a2 above var_high,
/// and a half-sine blend in between (inclusive of both bounds).
[[nodiscard]] double stiffness_from_variance(double variance, const StiffnessSchedule& s);

[[nodiscard]] std::vector<AxisStiffness> build_stiffness_profile(std::span<const Point2> remote_attractors,
                                                                 const gp::Model& gp, const StiffnessSchedule& s);

[[nodiscard]] double mean_path_variance(std::span<const Point2> remote_attractors, const gp::Model& gp);

/// Tunnel threshold rises from b1 - b2 to b1 + b2 with the mean path variance.
[[nodiscard]] double tunnel_threshold_from_variance(double mean_variance, const TunnelSchedule& t);

}  // namespace vsds::authority
