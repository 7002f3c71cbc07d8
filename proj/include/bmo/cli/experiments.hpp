#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bmo/cli/config.hpp"
#include "bmo/cli/manifest.hpp"

namespace bmo::cli {

/// One line of an MC experiment's summary.csv: an estimate against its
/// acceptance band [lower, upper]. dof > 0 marks a fitted slope with that
/// many residual degrees of freedom.
struct BandRow {
  std::string check;
  double value = 0.0;
  double std_error = 0.0;
  int dof = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool holds = false;
};

/// Columns: check,value,std_error,dof,lower,upper,holds.
void write_band_csv(std::ostream& os, const std::vector<BandRow>& rows);
std::vector<BandRow> read_band_csv(std::istream& is);

struct RunResult {
  RunManifest manifest;
  /// Human-readable lines naming every failed check with its witness.
  std::vector<std::string> failures;
  /// Text table of the run's summary.
  std::string table;
  bool passed() const noexcept { return manifest.passed; }
};

/// Runs the experiment into config.out (created if needed) and writes
/// manifest.json there. Data files depend on the config and seed only; the
/// worker count (config.jobs, 0 = all cores) never changes them. Progress
/// lines go to `log` when given.
RunResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

}  // namespace bmo::cli
