#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bmo::cli {

/// One check across every run of one experiment kind. Exact-suite rows fill
/// n_cases, violations and worst_ratio; MC rows fill the pooled estimate and
/// count each out-of-band run as a violation.
struct AggregateRow {
  std::string kind;
  std::string check;
  std::size_t n_runs = 0;
  std::size_t n_cases = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  std::string worst_case;
  bool has_estimate = false;
  double estimate = 0.0;
  double std_error = 0.0;
  /// Residual degrees of freedom summed over runs; 0 uses the normal quantile.
  int dof = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool informational = false;
};

struct Pooled {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Inverse-variance weighted mean, stderr = (sum 1/se_i^2)^{-1/2}. With any
/// se_i = 0 the plain mean is returned with stderr 0.
Pooled pool_inverse_variance(const std::vector<double>& values, const std::vector<double>& stderrs);

/// Two-sided 95% interval: Student t with `dof` degrees of freedom, normal
/// when dof <= 0.
std::pair<double, double> confidence_interval(double estimate, double std_error, int dof);

/// Reads every manifest and the summary.csv it lists. Throws
/// std::runtime_error naming a missing file.
std::vector<AggregateRow> report_summary(const std::vector<std::string>& manifest_paths);

/// Columns: kind,check,n_runs,n_cases,violations,worst_ratio,worst_case,
/// estimate,std_error,dof,ci_low,ci_high.
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
std::string aggregate_table(const std::vector<AggregateRow>& rows);

}  // namespace bmo::cli
