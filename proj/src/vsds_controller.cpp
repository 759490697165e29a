#include "vsds/vsds_controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "vsds/errors.hpp"

namespace vsds {

void VsdsParams::validate() const {
  if (!(spacing > 0.0)) throw InvalidArgument("attractor spacing must be positive");
  if (!(kernel_ratio > 0.0) || !(tunnel_kernel_ratio > 0.0)) throw InvalidArgument("kernel ratios must be positive");
  if (!(ramp_spacings > 0.0)) throw InvalidArgument("ramp distance must be positive");
  if (!(ramp_floor >= 0.0 && ramp_floor <= 1.0)) throw InvalidArgument("ramp floor must lie in [0, 1]");
  if ((damping - damping.transpose()).norm() > 1e-12 || damping.determinant() <= 0.0 || damping(0, 0) <= 0.0)
    throw InvalidArgument("damping must be symmetric positive definite");
}

std::vector<Point2> sample_attractors(const ReferencePath& path, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("attractor spacing must be positive");
  const auto& pts = path.points;
  if (pts.size() < 2) throw PathTooShort("reference path has a single point");

  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) arc[i] = arc[i - 1] + (pts[i] - pts[i - 1]).norm();
  const double total = arc.back();
  if (total < spacing / 2.0) throw PathTooShort("reference path shorter than half an attractor spacing");

  const auto segments = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(total / spacing)));
  const double step = total / static_cast<double>(segments);

  std::vector<Point2> out;
  out.reserve(segments + 1);
  out.push_back(pts.front());
  std::size_t j = 1;
  for (std::size_t k = 1; k < segments; ++k) {
    const double s = step * static_cast<double>(k);
    while (j + 1 < pts.size() && arc[j] < s) ++j;
    const double seg = arc[j] - arc[j - 1];
    const double t = seg > 0.0 ? (s - arc[j - 1]) / seg : 0.0;
    out.push_back(pts[j - 1] + t * (pts[j] - pts[j - 1]));
  }
  out.push_back(path.goal);
  return out;
}

Vel2 local_direction(const ReshapedDs& f, const Point2& x, double speed_floor) {
  const Vel2 v = f(x);
  const double n = v.norm();
  if (n <= speed_floor) throw DegenerateDirection("flow vanishes at the attractor");
  return v / n;
}

Mat2 build_stiffness_frame(double k_par, double k_perp, const Vel2& d) {
  if (!(k_par > 0.0) || !(k_perp > 0.0)) throw InvalidArgument("stiffness values must be positive");
  const Vel2 u = d.normalized();
  Mat2 q;
  q.col(0) = u;
  q.col(1) = perp(u);
  const Mat2 k = Eigen::Vector2d(k_par, k_perp).asDiagonal();
  Mat2 a = -q * k * q.transpose();
  // Force exact symmetry.
  const double off = 0.5 * (a(0, 1) + a(1, 0));
  a(0, 1) = off;
  a(1, 0) = off;
  return a;
}

AttractorChain AttractorChain::build(std::span<const Point2> remote_attractors, std::span<const Vel2> directions,
                                     std::span<const authority::AxisStiffness> stiffness, const WorkspaceMap& map,
                                     double kernel_ratio, double tunnel_ratio, double fallback_width) {
  if (remote_attractors.size() < 2) throw InvalidArgument("attractor chain needs a start and at least one attractor");
  const std::size_t n = remote_attractors.size() - 1;
  if (directions.size() != n || stiffness.size() != n)
    throw InvalidArgument("one direction and one stiffness pair per local system required");

  AttractorChain c;
  c.attractors_.reserve(n + 1);
  for (const auto& x : remote_attractors) c.attractors_.push_back(map.to_master(x));

  double total = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const Point2& a = c.attractors_[i - 1];
    const Point2& b = c.attractors_[i];
    const double seg = (b - a).norm();
    total += seg;
    c.centers_.push_back(0.5 * (a + b));
    c.widths_.push_back(seg > 0.0 ? kernel_ratio * seg : fallback_width);
    c.tunnel_widths_.push_back(c.widths_.back() * tunnel_ratio / kernel_ratio);
    c.directions_.push_back(directions[i - 1].normalized());
    c.stiffness_.push_back(stiffness[i - 1]);
    c.frames_.push_back(build_stiffness_frame(stiffness[i - 1].k_par, stiffness[i - 1].k_perp, c.directions_.back()));
  }
  c.spacing_ = total > 0.0 ? total / static_cast<double>(n) : fallback_width / kernel_ratio;
  return c;
}

WeightEval weights(const AttractorChain& chain, const Point2& x_m) {
  const std::size_t n = chain.size();
  WeightEval w;
  w.normalized.assign(n, 0.0);

  std::vector<double> raw(n);
  long double sum = 0.0L;
  std::size_t nearest = 0;
  double nearest_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = (x_m - chain.centers()[i]).squaredNorm();
    const double eps = chain.widths()[i];
    raw[i] = std::exp(-d2 / (2.0 * eps * eps));
    sum += raw[i];
    if (d2 < nearest_d2) {
      nearest_d2 = d2;
      nearest = i;
    }
  }

  if (sum == 0.0L) {
    w.normalized[nearest] = 1.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) w.normalized[i] = static_cast<double>(raw[i] / sum);
  }
  w.activation = tunnel_activation(chain, x_m);
  for (std::size_t i = 0; i < n; ++i) {
    if (w.normalized[i] > w.max) {
      w.max = w.normalized[i];
      w.argmax = i;
    }
  }
  return w;
}

double tunnel_activation(const AttractorChain& chain, const Point2& x_m) {
  double best = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const double eps = chain.tunnel_widths()[i];
    best = std::max(best, std::exp(-(x_m - chain.centers()[i]).squaredNorm() / (2.0 * eps * eps)));
  }
  return best;
}

double alpha_ramp(const Point2& x, const Point2& x0, double ramp_dist, double ramp_floor) {
  if (!(ramp_dist > 0.0)) throw InvalidArgument("ramp distance must be positive");
  const double s = std::clamp((x - x0).norm() / ramp_dist, 0.0, 1.0);
  return ramp_floor + (1.0 - ramp_floor) * s * s * (3.0 - 2.0 * s);
}

Force2 control_force(const AttractorChain& chain, const VsdsParams& params, const Point2& x_m, const Vel2& v_m,
                     const Point2& x0_m) {
  const WeightEval w = weights(chain, x_m);
  Force2 spring = Force2::Zero();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (w.normalized[i] == 0.0) continue;
    spring += w.normalized[i] * (chain.frames()[i] * (x_m - chain.attractors()[i + 1]));
  }
  const double alpha = alpha_ramp(x_m, x0_m, params.ramp_spacings * chain.spacing(), params.ramp_floor);
  return alpha * spring - params.damping * v_m;
}

TunnelState tunnel_check(const AttractorChain& chain, double threshold, const Point2& x_m) {
  return tunnel_activation(chain, x_m) >= threshold ? TunnelState::Inside : TunnelState::Outside;
}

}  // namespace vsds
