#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "bmo/analysis/suite.hpp"

namespace bmo::analysis {

nlohmann::json to_json(const CheckReport& r);
CheckReport check_report_from_json(const nlohmann::json& j);

/// One JSON object per line: {"case": ..., "check": ..., "holds": ..., ...}.
void write_jsonl(std::ostream& os, std::span<const CaseReport> reports);

/// Columns: check,n_cases,violations,worst_ratio,worst_case,informational.
void write_summary_csv(std::ostream& os, std::span<const CheckSummary> summary);

/// Shortest decimal form that reads back to the same double ("inf", "nan" for
/// non-finite values).
std::string format_double(double x);

}  // namespace bmo::analysis
