#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsds/guidance.hpp"

namespace vsds {

/// Regular grid over the remote workspace, row-major in z then y.
struct GridSpec {
  double y_min = 0.0, y_max = 1.0;
  std::size_t ny = 2;
  double z_min = 0.0, z_max = 1.0;
  std::size_t nz = 2;

  /// Parses "ymin:ymax:ny,zmin:zmax:nz". Throws InvalidArgument.
  [[nodiscard]] static GridSpec parse(const std::string& text);
  [[nodiscard]] std::size_t size() const { return ny * nz; }
  [[nodiscard]] Point2 at(std::size_t iy, std::size_t iz) const;
};

struct StiffnessEllipse {
  Point2 center = Point2::Zero();  // remote frame, attractor of the system
  Vel2 major = Vel2::Zero();       // unit, along the motion
  double k_par = 0.0;
  double k_perp = 0.0;
};

/// Field samples on a grid. Points are in the remote frame, VSDS forces in the
/// master frame evaluated at rest.
struct FieldDump {
  GridSpec grid;
  std::vector<Point2> points;
  std::vector<Vel2> flow;        // f_r
  std::vector<Vel2> flow_dir;    // unit f_r, zero where the flow vanishes
  std::vector<double> flow_speed;
  bool guided = false;
  double threshold = 0.0;
  std::vector<Force2> vsds_force;  // empty unless guided
  std::vector<double> omega_max;
  std::vector<bool> inside;
  std::vector<Point2> attractors;  // remote frame
  std::vector<StiffnessEllipse> ellipses;
};

[[nodiscard]] FieldDump export_field(const ReshapedDs& field, const std::optional<GuidancePlan>& plan,
                                     const WorkspaceMap& map, const VsdsParams& vsds, const GridSpec& grid);

[[nodiscard]] nlohmann::json to_json(const FieldDump& d);

}  // namespace vsds
