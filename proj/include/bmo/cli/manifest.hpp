#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace bmo::cli {

struct RunManifest {
  std::string kind;
  std::string config_hash;
  std::string tool_version;
  std::uint64_t seed = 0;
  /// UTC, ISO 8601.
  std::string started;
  std::string finished;
  /// Paths relative to the manifest's directory.
  std::vector<std::string> outputs;
  /// Canonical config text the hash was computed from.
  std::string config;
  bool passed = false;
  /// Experiment-specific metadata: model, taming, proxy, ensemble shape.
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const std::string& path, const RunManifest& m);
RunManifest read_manifest(const std::string& path);

std::string utc_timestamp();

const char* tool_version() noexcept;

}  // namespace bmo::cli
