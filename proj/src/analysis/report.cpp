#include "bmo/analysis/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace bmo::analysis {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double read_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
  return {{"check", r.check},         {"holds", r.holds},
          {"lhs", number(r.lhs)},     {"rhs", number(r.rhs)},
          {"tolerance", r.tolerance}, {"witness", r.witness},
          {"saturated", r.saturated}, {"informational", r.informational}};
}

CheckReport check_report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.check = j.at("check").get<std::string>();
  r.holds = j.at("holds").get<bool>();
  r.lhs = read_number(j.at("lhs"));
  r.rhs = read_number(j.at("rhs"));
  r.tolerance = j.at("tolerance").get<double>();
  r.witness = j.value("witness", "");
  r.saturated = j.value("saturated", false);
  r.informational = j.value("informational", false);
  return r;
}

void write_jsonl(std::ostream& os, std::span<const CaseReport> reports) {
  for (const auto& cr : reports) {
    nlohmann::json j = to_json(cr.report);
    j["case"] = cr.case_id;
    os << j.dump() << '\n';
  }
}

void write_summary_csv(std::ostream& os, std::span<const CheckSummary> summary) {
  os << "check,n_cases,violations,worst_ratio,worst_case,informational\n";
  for (const auto& s : summary)
    os << csv_field(s.check) << ',' << s.n_cases << ',' << s.violations << ','
       << format_double(s.worst_ratio) << ',' << csv_field(s.worst_case) << ','
       << (s.informational ? "true" : "false") << '\n';
}

}  // namespace bmo::analysis
