#include "bmo/cli/report.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "bmo/analysis/report.hpp"
#include "bmo/cli/experiments.hpp"
#include "bmo/cli/manifest.hpp"
#include "bmo/numeric.hpp"

namespace bmo::cli {

namespace fs = std::filesystem;
using analysis::format_double;

namespace {

std::ifstream open_listed(const fs::path& dir, const RunManifest& m, const std::string& name) {
  if (std::find(m.outputs.begin(), m.outputs.end(), name) == m.outputs.end())
    throw std::runtime_error("manifest in " + dir.string() + " lists no " + name);
  std::ifstream in(dir / name, std::ios::binary);
  if (!in) throw std::runtime_error("missing file " + (dir / name).string());
  return in;
}

std::vector<analysis::CheckSummary> read_check_summary(std::istream& is, const std::string& where) {
  std::string line;
  if (!std::getline(is, line) || line != "check,n_cases,violations,worst_ratio,worst_case,informational")
    throw std::runtime_error(where + ": unexpected header");
  std::vector<analysis::CheckSummary> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> c;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) c.push_back(cell);
    if (line.back() == ',') c.emplace_back();
    if (c.size() != 6) throw std::runtime_error(where + ": malformed row '" + line + "'");
    analysis::CheckSummary s;
    s.check = c[0];
    s.n_cases = std::stoul(c[1]);
    s.violations = std::stoul(c[2]);
    s.worst_ratio = c[3] == "inf" ? INFINITY : c[3] == "nan" ? NAN : std::stod(c[3]);
    s.worst_case = c[4];
    s.informational = c[5] == "true";
    out.push_back(s);
  }
  return out;
}

}  // namespace

Pooled pool_inverse_variance(const std::vector<double>& values, const std::vector<double>& stderrs) {
  if (values.empty()) return {NAN, NAN};
  bool exact = false;
  for (double se : stderrs) exact = exact || !(se > 0.0);
  if (exact) return {pairwise_sum(values) / static_cast<double>(values.size()), 0.0};
  std::vector<double> w(values.size()), wx(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    w[i] = 1.0 / (stderrs[i] * stderrs[i]);
    wx[i] = w[i] * values[i];
  }
  const double sw = pairwise_sum(w);
  return {pairwise_sum(wx) / sw, 1.0 / std::sqrt(sw)};
}

std::pair<double, double> confidence_interval(double estimate, double std_error, int dof) {
  if (!std::isfinite(estimate) || !std::isfinite(std_error)) return {NAN, NAN};
  if (std_error == 0.0) return {estimate, estimate};
  const double q = dof > 0
                       ? boost::math::quantile(boost::math::students_t(dof), 0.975)
                       : boost::math::quantile(boost::math::normal(), 0.975);
  return {estimate - q * std_error, estimate + q * std_error};
}

std::vector<AggregateRow> report_summary(const std::vector<std::string>& manifest_paths) {
  std::vector<AggregateRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> samples;
  auto row_for = [&](const std::string& kind, const std::string& check) -> std::size_t {
    auto [it, fresh] = index.emplace(std::make_pair(kind, check), rows.size());
    if (fresh) {
      AggregateRow r;
      r.kind = kind;
      r.check = check;
      rows.push_back(std::move(r));
    }
    return it->second;
  };

  for (const auto& path : manifest_paths) {
    const fs::path dir = fs::path(path).parent_path();
    const RunManifest m = read_manifest(path);
    auto in = open_listed(dir, m, "summary.csv");
    if (m.kind == "verify-finite" || m.kind == "jn-check") {
      for (const auto& s : read_check_summary(in, (dir / "summary.csv").string())) {
        auto& r = rows[row_for(m.kind, s.check)];
        ++r.n_runs;
        r.n_cases += s.n_cases;
        r.violations += s.violations;
        r.informational = s.informational;
        if (r.n_runs == 1 || s.worst_ratio > r.worst_ratio) {
          r.worst_ratio = s.worst_ratio;
          r.worst_case = s.worst_case;
        }
      }
    } else {
      for (const auto& b : read_band_csv(in)) {
        const std::size_t i = row_for(m.kind, b.check);
        auto& r = rows[i];
        ++r.n_runs;
        ++r.n_cases;
        if (!b.holds) ++r.violations;
        r.has_estimate = true;
        r.dof += std::max(b.dof, 0);
        samples[i].first.push_back(b.value);
        samples[i].second.push_back(b.std_error);
      }
    }
  }
  for (auto& [i, s] : samples) {
    const Pooled p = pool_inverse_variance(s.first, s.second);
    rows[i].estimate = p.estimate;
    rows[i].std_error = p.std_error;
    std::tie(rows[i].ci_low, rows[i].ci_high) = confidence_interval(p.estimate, p.std_error, rows[i].dof);
  }
  return rows;
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "kind,check,n_runs,n_cases,violations,worst_ratio,worst_case,estimate,std_error,dof,ci_low,"
        "ci_high\n";
  for (const auto& r : rows) {
    os << r.kind << ',' << r.check << ',' << r.n_runs << ',' << r.n_cases << ',' << r.violations
       << ',';
    if (r.has_estimate) {
      os << ",," << format_double(r.estimate) << ',' << format_double(r.std_error) << ',' << r.dof
         << ',' << format_double(r.ci_low) << ',' << format_double(r.ci_high) << '\n';
    } else {
      os << format_double(r.worst_ratio) << ',' << r.worst_case << ",,,,,\n";
    }
  }
}

std::string aggregate_table(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(15) << "kind" << std::setw(24) << "check" << std::setw(6) << "runs"
     << std::setw(8) << "cases" << std::setw(11) << "violations" << "worst ratio / estimate [95% CI]\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(15) << r.kind << std::setw(24) << r.check << std::setw(6)
       << r.n_runs << std::setw(8) << r.n_cases << std::setw(11) << r.violations
       << std::setprecision(5);
    if (r.has_estimate)
      os << r.estimate << " +- " << r.std_error << " [" << r.ci_low << ", " << r.ci_high << "]";
    else
      os << r.worst_ratio << (r.informational ? " (informational)" : "");
    os << '\n';
  }
  return os.str();
}

}  // namespace bmo::cli
