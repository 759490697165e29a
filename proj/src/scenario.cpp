#include "vsds/scenario.hpp"

#include "vsds/errors.hpp"

namespace vsds::sim {

std::string to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::Vsds: return "vsds";
    case ControllerKind::Flow: return "flow";
    case ControllerKind::OpenLoop: return "openloop";
    case ControllerKind::Free: return "free";
  }
  return "unknown";
}

ControllerKind controller_from_string(const std::string& s) {
  if (s == "vsds") return ControllerKind::Vsds;
  if (s == "flow") return ControllerKind::Flow;
  if (s == "openloop") return ControllerKind::OpenLoop;
  if (s == "free") return ControllerKind::Free;
  throw InvalidArgument("unknown controller '" + s + "'");
}

const HumanSpec& Scenario::human_spec(const std::string& key) const {
  const auto it = humans.find(key);
  if (it == humans.end()) throw InvalidArgument("scenario '" + name + "' defines no human policy '" + key + "'");
  return it->second;
}

void Scenario::validate() const {
  env.validate();
  if (!(beta > 0.0)) throw InvalidArgument("workspace scale must be positive");
  if (!(mass > 0.0) || !(dt > 0.0) || !(t_max > 0.0)) throw InvalidArgument("mass, dt and t_max must be positive");
  if (!(force_cap > 0.0)) throw InvalidArgument("force cap must be positive");
  if (!(ds.gain > 0.0)) throw InvalidArgument("linear DS gain must be positive");
  if (ds.attractor != env.goal) throw InvalidArgument("linear DS attractor must equal the environment goal");
  if (!model) throw InvalidArgument("scenario has no regression model");
  guidance.vsds.validate();
  guidance.stiffness.validate();
  guidance.tunnel.validate();
}

}  // namespace vsds::sim
