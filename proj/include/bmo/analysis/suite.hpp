#pragma once

#include <span>
#include <string>
#include <vector>

#include "bmo/analysis/checks.hpp"
#include "bmo/analysis/corpus.hpp"

namespace bmo::analysis {

struct SuiteOptions {
  std::vector<int> moment_orders{1, 2, 3};
  /// Rates are these fractions of the largest admissible rate.
  std::vector<double> lambda_fractions{0.25, 0.5, 0.9};
  std::vector<double> control_exponents{1.0, 2.0};
  RhoOptions rho;
  unsigned jobs = 1;
};

/// The worst report of one check family on one case.
struct CaseReport {
  std::string case_id;
  CheckReport report;
};

/// Every check family on one case, one report per family in a fixed order. An
/// exception escaping a check is recorded as a failing report carrying the
/// message.
std::vector<CaseReport> run_case(const FiniteCase& c, const SuiteOptions& options);

/// run_case over the corpus; output order follows the corpus regardless of
/// `jobs`.
std::vector<CaseReport> run_finite_suite(std::span<const FiniteCase> corpus,
                                         const SuiteOptions& options);

struct CheckSummary {
  std::string check;
  std::size_t n_cases = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  std::string worst_case;
  bool informational = false;
};

/// One row per check family, in first-seen order. Informational families
/// never count violations.
std::vector<CheckSummary> summarize(std::span<const CaseReport> reports);

}  // namespace bmo::analysis
