#include "bmo/cli/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#ifndef BMOFORGE_VERSION
#define BMOFORGE_VERSION "0.0.0"
#endif

namespace bmo::cli {

nlohmann::json to_json(const RunManifest& m) {
  return {{"kind", m.kind},
          {"config_hash", m.config_hash},
          {"tool_version", m.tool_version},
          {"seed", m.seed},
          {"started", m.started},
          {"finished", m.finished},
          {"outputs", m.outputs},
          {"config", m.config},
          {"passed", m.passed},
          {"details", m.details}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.kind = j.at("kind").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.config = j.value("config", "");
  m.passed = j.value("passed", false);
  m.details = j.value("details", nlohmann::json::object());
  return m;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(m).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing manifest " + path);
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed manifest " + path + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* tool_version() noexcept { return BMOFORGE_VERSION; }

}  // namespace bmo::cli
