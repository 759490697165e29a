#pragma once

#include <span>
#include <vector>

#include "vsds/authority.hpp"
#include "vsds/motion_field.hpp"
#include "vsds/types.hpp"
#include "vsds/workspace.hpp"

namespace vsds {

struct VsdsParams {
  double spacing = 0.04;        // attractor spacing along the remote path, m
  double kernel_ratio = 0.5;    // blending kernel width / segment length
  double tunnel_kernel_ratio = 1.0;  // tunnel kernel width / segment length
  Mat2 damping = 25.0 * Mat2::Identity();  // N s/m, master side
  double ramp_spacings = 2.0;   // ramp distance in attractor spacings
  double ramp_floor = 0.2;      // alpha at the chain start

  void validate() const;
};

/// Arc-length resampling of the path into round(L / spacing) equal segments.
/// Throws PathTooShort if the path is shorter than spacing / 2.
[[nodiscard]] std::vector<Point2> sample_attractors(const ReferencePath& path, double spacing);

/// Unit vector along f(x). Throws DegenerateDirection where the flow vanishes.
[[nodiscard]] Vel2 local_direction(const ReshapedDs& f, const Point2& x, double speed_floor = 1e-4);

/// -Q diag(k_par, k_perp) Q^T with Q = [d, perp(d)].
[[nodiscard]] Mat2 build_stiffness_frame(double k_par, double k_perp, const Vel2& d);

/// Local linear systems along a reference path, expressed on the master side.
/// attractors[0] is the start; system i (1-based) spans attractors[i-1] to
/// attractors[i] and is stored at index i-1 of the per-system arrays.
class AttractorChain {
 public:
  /// `remote_attractors` has N + 1 points; `directions` and `stiffness` have N
  /// entries, one per system.
  static AttractorChain build(std::span<const Point2> remote_attractors, std::span<const Vel2> directions,
                              std::span<const authority::AxisStiffness> stiffness, const WorkspaceMap& map,
                              double kernel_ratio, double tunnel_ratio, double fallback_width);

  [[nodiscard]] std::size_t size() const { return frames_.size(); }
  [[nodiscard]] const std::vector<Point2>& attractors() const { return attractors_; }
  [[nodiscard]] const std::vector<Point2>& centers() const { return centers_; }
  [[nodiscard]] const std::vector<double>& widths() const { return widths_; }
  [[nodiscard]] const std::vector<double>& tunnel_widths() const { return tunnel_widths_; }
  [[nodiscard]] const std::vector<Mat2>& frames() const { return frames_; }
  [[nodiscard]] const std::vector<Vel2>& directions() const { return directions_; }
  [[nodiscard]] const std::vector<authority::AxisStiffness>& stiffness() const { return stiffness_; }
  [[nodiscard]] const Point2& start() const { return attractors_.front(); }
  [[nodiscard]] const Point2& goal() const { return attractors_.back(); }
  /// Mean segment length on the master side.
  [[nodiscard]] double spacing() const { return spacing_; }

 private:
  std::vector<Point2> attractors_;
  std::vector<Point2> centers_;
  std::vector<double> widths_;
  std::vector<double> tunnel_widths_;
  std::vector<Mat2> frames_;
  std::vector<Vel2> directions_;
  std::vector<authority::AxisStiffness> stiffness_;
  double spacing_ = 0.0;
};

struct WeightEval {
  std::vector<double> normalized;  // sums to one
  double max = 0.0;                // largest normalized weight
  std::size_t argmax = 0;
  double activation = 0.0;         // tunnel activation at x, in [0, 1]
};

[[nodiscard]] WeightEval weights(const AttractorChain& chain, const Point2& x_m);

/// Largest unnormalized tunnel-kernel value at x_m; this is the quantity the
/// tunnel compares against its threshold. Normalized weights cannot serve:
/// along a straight chain they do not decay with perpendicular distance.
[[nodiscard]] double tunnel_activation(const AttractorChain& chain, const Point2& x_m);

[[nodiscard]] double alpha_ramp(const Point2& x, const Point2& x0, double ramp_dist, double ramp_floor);

/// alpha(x) * sum_i w_i A_i (x - x_i) - D v.
/// The ramp distance is params.ramp_spacings times the chain's mean segment
/// length.
[[nodiscard]] Force2 control_force(const AttractorChain& chain, const VsdsParams& params, const Point2& x_m,
                                   const Vel2& v_m, const Point2& x0_m);

enum class TunnelState { Inside, Outside };

/// Inside iff the peak kernel activation reaches the threshold.
[[nodiscard]] TunnelState tunnel_check(const AttractorChain& chain, double threshold, const Point2& x_m);

}  // namespace vsds
