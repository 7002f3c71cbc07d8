#pragma once
// JSON documents for spaces and processes, used to replay failing cases.
// Schema: docs/formats.md ("Finite-space case document").

#include <map>
#include <string>

#include <json.hpp>

#include "bmo/filtration/process.hpp"
#include "bmo/filtration/space.hpp"

namespace bmo::filtration {

nlohmann::json space_to_json(const FiniteFilteredSpace& space);
FiniteFilteredSpace space_from_json(const nlohmann::json& doc);

nlohmann::json process_to_json(const AdaptedProcess& v);
AdaptedProcess process_from_json(const FiniteFilteredSpace& space, const nlohmann::json& doc);

/// A space plus named processes on it.
struct CaseDocument {
  FiniteFilteredSpace space;
  std::map<std::string, AdaptedProcess> processes;
};

nlohmann::json case_to_json(const CaseDocument& doc);
CaseDocument case_from_json(const nlohmann::json& doc);

}  // namespace bmo::filtration
