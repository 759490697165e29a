#include "vsds/field_export.hpp"

#include <charconv>
#include <sstream>

#include "vsds/errors.hpp"

namespace vsds {

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("bad number '" + s + "' in grid spec");
  return v;
}

void parse_axis(const std::string& text, double& lo, double& hi, std::size_t& n) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument("grid axis must be min:max:count");
  lo = parse_double(parts[0]);
  hi = parse_double(parts[1]);
  const auto& c = parts[2];
  const auto res = std::from_chars(c.data(), c.data() + c.size(), n);
  if (res.ec != std::errc{} || res.ptr != c.data() + c.size() || n < 1)
    throw InvalidArgument("grid count must be a positive integer");
  if (!(hi >= lo)) throw InvalidArgument("grid axis max must not be below min");
}

nlohmann::json vec_json(const Eigen::Vector2d& v) { return nlohmann::json::array({v.x(), v.y()}); }

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidArgument("grid spec must be ymin:ymax:ny,zmin:zmax:nz");
  GridSpec g;
  parse_axis(text.substr(0, comma), g.y_min, g.y_max, g.ny);
  parse_axis(text.substr(comma + 1), g.z_min, g.z_max, g.nz);
  return g;
}

Point2 GridSpec::at(std::size_t iy, std::size_t iz) const {
  const double fy = ny > 1 ? static_cast<double>(iy) / static_cast<double>(ny - 1) : 0.0;
  const double fz = nz > 1 ? static_cast<double>(iz) / static_cast<double>(nz - 1) : 0.0;
  return {y_min + fy * (y_max - y_min), z_min + fz * (z_max - z_min)};
}

FieldDump export_field(const ReshapedDs& field, const std::optional<GuidancePlan>& plan, const WorkspaceMap& map,
                       const VsdsParams& vsds, const GridSpec& grid) {
  FieldDump d;
  d.grid = grid;
  d.guided = plan.has_value();
  const std::size_t n = grid.size();
  d.points.reserve(n);
  for (std::size_t iz = 0; iz < grid.nz; ++iz)
    for (std::size_t iy = 0; iy < grid.ny; ++iy) d.points.push_back(grid.at(iy, iz));

  for (const auto& x : d.points) {
    const Vel2 f = field(x);
    const double s = f.norm();
    d.flow.push_back(f);
    d.flow_speed.push_back(s);
    d.flow_dir.push_back(s > 0.0 ? Vel2(f / s) : Vel2::Zero());
  }

  if (plan) {
    const auto& chain = plan->chain;
    d.threshold = plan->threshold;
    for (const auto& x : d.points) {
      const Point2 x_m = map.to_master(x);
      const double w = tunnel_activation(chain, x_m);
      d.omega_max.push_back(w);
      d.inside.push_back(w >= plan->threshold);
      d.vsds_force.push_back(control_force(chain, vsds, x_m, Vel2::Zero(), chain.start()));
    }
    d.attractors = plan->remote_attractors;
    for (std::size_t i = 0; i < chain.size(); ++i)
      d.ellipses.push_back({plan->remote_attractors[i + 1], chain.directions()[i], chain.stiffness()[i].k_par,
                            chain.stiffness()[i].k_perp});
  }
  return d;
}

nlohmann::json to_json(const FieldDump& d) {
  using nlohmann::json;
  json pts = json::array(), flow = json::array(), dir = json::array(), force = json::array();
  for (const auto& p : d.points) pts.push_back(vec_json(p));
  for (const auto& v : d.flow) flow.push_back(vec_json(v));
  for (const auto& v : d.flow_dir) dir.push_back(vec_json(v));
  for (const auto& v : d.vsds_force) force.push_back(vec_json(v));
  json att = json::array();
  for (const auto& a : d.attractors) att.push_back(vec_json(a));
  json ell = json::array();
  for (const auto& e : d.ellipses)
    ell.push_back({{"center", vec_json(e.center)}, {"major", vec_json(e.major)}, {"k_par", e.k_par}, {"k_perp", e.k_perp}});
  json mask = json::array();
  for (bool b : d.inside) mask.push_back(b);
  return {{"grid",
           {{"y", {d.grid.y_min, d.grid.y_max, d.grid.ny}}, {"z", {d.grid.z_min, d.grid.z_max, d.grid.nz}}}},
          {"points", pts},
          {"flow", flow},
          {"flow_dir", dir},
          {"flow_speed", d.flow_speed},
          {"guided", d.guided},
          {"threshold", d.threshold},
          {"vsds_force", force},
          {"omega_max", d.omega_max},
          {"inside", mask},
          {"attractors", att},
          {"ellipses", ell}};
}

}  // namespace vsds
