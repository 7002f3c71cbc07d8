// bmoforge: config-driven runner for the exact suites and MC experiments.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bmo/cli/config.hpp"
#include "bmo/cli/experiments.hpp"
#include "bmo/cli/report.hpp"
#include "bmo/error.hpp"

namespace {

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> jobs;
  bool quiet = false;
};

int run(bmo::cli::ExperimentKind kind, const RunFlags& f) {
  auto config = bmo::cli::load_config(f.config);
  if (config.kind != kind)
    throw bmo::ValidationError(std::string("config is for '") + bmo::cli::kind_name(config.kind) +
                               "', not '" + bmo::cli::kind_name(kind) + "'");
  config.seed = bmo::cli::resolve_seed(config.seed, std::getenv("BMOFORGE_SEED"), f.seed);
  if (!f.out.empty()) config.out = f.out;
  if (f.jobs) config.jobs = *f.jobs;

  const auto result = bmo::cli::run_experiment(config, f.quiet ? nullptr : &std::cerr);
  std::cout << result.table;
  constexpr std::size_t kShown = 20;
  for (std::size_t i = 0; i < result.failures.size() && i < kShown; ++i)
    std::cerr << "FAIL " << result.failures[i] << '\n';
  if (result.failures.size() > kShown)
    std::cerr << "... " << result.failures.size() - kShown << " more; see " << config.out
              << "/violations.jsonl\n";
  std::cout << (result.passed() ? "PASS" : "FAIL") << ' ' << config.out << "/manifest.json\n";
  return result.passed() ? 0 : 1;
}

int report(const std::vector<std::string>& manifests, const std::string& out) {
  const auto rows = bmo::cli::report_summary(manifests);
  const std::string table = bmo::cli::aggregate_table(rows);
  std::cout << table;
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    std::ofstream csv(std::filesystem::path(out) / "report.csv", std::ios::binary);
    bmo::cli::write_aggregate_csv(csv, rows);
    std::ofstream txt(std::filesystem::path(out) / "report.txt", std::ios::binary);
    txt << table;
    if (!csv || !txt) throw std::runtime_error("cannot write report to " + out);
  }
  for (const auto& r : rows)
    if (r.violations > 0 && !r.informational) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bmoforge: oscillation-modulus verification laboratory"};
  app.set_version_flag("--version", bmo::cli::tool_version());
  app.require_subcommand(1);

  RunFlags flags;
  using bmo::cli::ExperimentKind;
  const std::pair<const char*, ExperimentKind> kinds[] = {
      {"verify-finite", ExperimentKind::verify_finite}, {"rho-grid", ExperimentKind::rho_grid},
      {"jn-check", ExperimentKind::jn_check},           {"davie", ExperimentKind::davie},
      {"quadrature", ExperimentKind::quadrature},       {"tamed-em", ExperimentKind::tamed_em}};
  std::optional<ExperimentKind> chosen;
  for (const auto& [name, kind] : kinds) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", flags.config, "config file (key/value or JSON)")->required();
    sub->add_option("--seed", flags.seed, "master seed; overrides BMOFORGE_SEED and the config");
    sub->add_option("--out", flags.out, "output directory; overrides the config");
    sub->add_option("--jobs", flags.jobs, "worker threads, 0 = all cores");
    sub->add_flag("--quiet", flags.quiet, "no progress lines");
    sub->callback([&chosen, k = kind] { chosen = k; });
  }

  std::vector<std::string> manifests;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "aggregate manifests into report.csv and a text table");
  rep->add_option("manifests", manifests, "manifest.json files");
  rep->add_option("--out", report_out, "directory for report.csv and report.txt");

  CLI11_PARSE(app, argc, argv);
  try {
    if (chosen) return run(*chosen, flags);
    return report(manifests, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
