#include "bmo/filtration/serialize.hpp"

#include "bmo/error.hpp"

namespace bmo::filtration {

namespace {
constexpr const char* kSpaceFormat = "bmoforge.space/1";
constexpr const char* kCaseFormat = "bmoforge.case/1";
}  // namespace

nlohmann::json space_to_json(const FiniteFilteredSpace& space) {
  nlohmann::json per_node = nlohmann::json::array();
  for (NodeId n = 0; n < space.node_count(); ++n)
    if (!space.is_leaf(n)) per_node.push_back(space.transitions(n));
  return {{"format", kSpaceFormat},
          {"depth", space.depth()},
          {"branching", space.branching()},
          {"transitions", per_node}};
}

FiniteFilteredSpace space_from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format", std::string{}) != kSpaceFormat)
      throw ValidationError(std::string("space document: expected format ") + kSpaceFormat);
    const int depth = doc.at("depth").get<int>();
    const int branching = doc.at("branching").get<int>();
    const auto& tr = doc.at("transitions");
    if (tr.is_object() && tr.contains("uniform"))
      return FiniteFilteredSpace::build(
          depth, branching, TransitionSpec::same_everywhere(tr.at("uniform").get<std::vector<double>>()));
    if (depth == 0) return FiniteFilteredSpace::build(0, branching, TransitionSpec::fair(branching));
    return FiniteFilteredSpace::build(
        depth, branching,
        TransitionSpec::explicit_nodes(tr.get<std::vector<std::vector<double>>>()));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("space document: ") + e.what());
  }
}

nlohmann::json process_to_json(const AdaptedProcess& v) {
  return {{"values", std::vector<double>(v.values().begin(), v.values().end())}};
}

AdaptedProcess process_from_json(const FiniteFilteredSpace& space, const nlohmann::json& doc) {
  try {
    return AdaptedProcess(space, doc.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("process document: ") + e.what());
  }
}

nlohmann::json case_to_json(const CaseDocument& doc) {
  nlohmann::json procs = nlohmann::json::object();
  for (const auto& [name, v] : doc.processes) procs[name] = process_to_json(v);
  return {{"format", kCaseFormat}, {"space", space_to_json(doc.space)}, {"processes", procs}};
}

CaseDocument case_from_json(const nlohmann::json& doc) {
  if (doc.value("format", std::string{}) != kCaseFormat)
    throw ValidationError(std::string("case document: expected format ") + kCaseFormat);
  CaseDocument out{space_from_json(doc.at("space")), {}};
  for (const auto& [name, p] : doc.at("processes").items())
    out.processes.emplace(name, process_from_json(out.space, p));
  return out;
}

}  // namespace bmo::filtration
