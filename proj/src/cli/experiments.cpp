#include "bmo/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bmo/analysis/report.hpp"
#include "bmo/analysis/suite.hpp"
#include "bmo/error.hpp"
#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/mc/rate_fit.hpp"
#include "bmo/numeric.hpp"
#include "bmo/parallel.hpp"
#include "bmo/schemes/davie.hpp"
#include "bmo/schemes/strong_error.hpp"

namespace bmo::cli {

namespace fs = std::filesystem;
using analysis::format_double;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

class Output {
 public:
  explicit Output(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back(name);
    return out;
  }

  const std::vector<std::string>& files() const noexcept { return files_; }
  const fs::path& dir() const noexcept { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string join(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string show(bool b) { return b ? "true" : "false"; }

BandRow band(std::string check, double value, double se, int dof, double lo, double hi) {
  const bool holds = std::isfinite(value) && value >= lo && value <= hi;
  return {std::move(check), value, se, dof, lo, hi, holds};
}

BandRow slope_band(std::string check, const std::optional<mc::RateFit>& fit, double lo,
                   double hi) {
  if (!fit) return band(std::move(check), kNan, kNan, 0, lo, hi);
  return band(std::move(check), fit->slope, fit->slope_stderr,
              static_cast<int>(fit->ns.size()) - 2, lo, hi);
}

std::optional<mc::RateFit> try_fit(const std::vector<double>& ns, const std::vector<double>& errs,
                                   std::vector<std::string>& notes) {
  try {
    return mc::rate_fit(ns, errs);
  } catch (const ValidationError& e) {
    notes.push_back(std::string("rate fit skipped: ") + e.what());
    return std::nullopt;
  }
}

std::string band_table(const std::vector<BandRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "check" << std::setw(14) << "value" << std::setw(12)
     << "stderr" << std::setw(22) << "band" << "result\n";
  for (const auto& r : rows) {
    std::ostringstream b;
    b << '[' << std::setprecision(4) << r.lower << ", " << r.upper << ']';
    os << std::left << std::setw(28) << r.check << std::setw(14) << std::setprecision(6)
       << r.value << std::setw(12) << std::setprecision(3) << r.std_error << std::setw(22)
       << b.str() << (r.holds ? "PASS" : "FAIL") << '\n';
  }
  return os.str();
}

std::string check_table(const std::vector<analysis::CheckSummary>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(24) << "check" << std::setw(8) << "cases" << std::setw(12)
     << "violations" << std::setw(14) << "worst_ratio" << "result\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(24) << r.check << std::setw(8) << r.n_cases << std::setw(12)
       << r.violations << std::setw(14) << std::setprecision(6) << r.worst_ratio
       << (r.informational ? "info" : r.violations == 0 ? "PASS" : "FAIL") << '\n';
  }
  return os.str();
}

struct Outcome {
  std::vector<std::string> failures;
  std::string table;
  nlohmann::json details = nlohmann::json::object();
};

void band_failures(const std::vector<BandRow>& rows, Outcome& o) {
  for (const auto& r : rows)
    if (!r.holds)
      o.failures.push_back(r.check + " = " + format_double(r.value) + " outside [" +
                           format_double(r.lower) + ", " + format_double(r.upper) + "]");
}

void finite_outcome(const std::vector<analysis::CaseReport>& reports, Output& out, Outcome& o) {
  const auto summary = analysis::summarize(reports);
  {
    auto f = out.open("reports.jsonl");
    analysis::write_jsonl(f, reports);
  }
  std::vector<analysis::CaseReport> violations;
  for (const auto& r : reports)
    if (!r.report.holds && !r.report.informational) violations.push_back(r);
  {
    auto f = out.open("violations.jsonl");
    analysis::write_jsonl(f, violations);
  }
  {
    auto f = out.open("summary.csv");
    analysis::write_summary_csv(f, summary);
  }
  for (const auto& v : violations)
    o.failures.push_back(v.report.check + " violated on " + v.case_id + ": lhs " +
                         format_double(v.report.lhs) + " > rhs " + format_double(v.report.rhs) +
                         " at " + v.report.witness);
  o.table = check_table(summary);
}

analysis::CorpusOptions corpus_options(std::size_t n, int lo, int hi, int branching,
                                       std::uint64_t seed) {
  analysis::CorpusOptions c;
  c.n_cases = n;
  c.min_depth = lo;
  c.max_depth = hi;
  c.branching = branching;
  c.seed = seed;
  return c;
}

Outcome run_verify_finite(const ExperimentConfig& c, Output& out) {
  const auto& p = c.verify_finite;
  const auto corpus =
      analysis::make_corpus(corpus_options(p.n_cases, p.min_depth, p.max_depth, p.branching, c.seed));
  analysis::SuiteOptions opts;
  opts.moment_orders = p.p;
  opts.lambda_fractions = p.lambda_fractions;
  opts.control_exponents = p.control_exponents;
  opts.rho.include_left_jump = p.left_jump;
  opts.jobs = c.jobs;
  Outcome o;
  finite_outcome(analysis::run_finite_suite(corpus, opts), out, o);
  o.details = {{"n_cases", corpus.size()}, {"left_jump", p.left_jump}};
  return o;
}

Outcome run_jn_check(const ExperimentConfig& c, Output& out) {
  const auto& p = c.jn_check;
  auto corpus =
      analysis::make_corpus(corpus_options(p.n_cases, p.min_depth, p.max_depth, p.branching, c.seed));
  if (p.process == "constant")
    for (std::size_t i = 0; i < corpus.size(); ++i)
      corpus[i].v = filtration::AdaptedProcess::constant(corpus[i].space, static_cast<double>(i));
  const filtration::RhoOptions rho{p.left_jump, filtration::kDefaultEnumerationCap};

  struct Row {
    int r, p;
    analysis::CheckReport report;
  };
  std::vector<std::vector<Row>> rows(corpus.size());
  parallel_for(corpus.size(), c.jobs, [&](std::size_t i) {
    const auto& fc = corpus[i];
    for (int r = 0; r <= fc.space.depth(); ++r)
      for (int order : p.p) {
        analysis::CheckReport rep;
        try {
          rep = analysis::jn_moment_check(fc.space, fc.v, r, order, rho);
        } catch (const std::exception& e) {
          rep.check = "jn_moment";
          rep.holds = false;
          rep.witness = e.what();
        }
        rows[i].push_back({r, order, rep});
      }
  });

  std::vector<analysis::CaseReport> reports;
  {
    auto f = out.open("jn.csv");
    f << "case,depth,r,p,lhs,rhs,ratio,holds\n";
    for (std::size_t i = 0; i < corpus.size(); ++i)
      for (const auto& row : rows[i]) {
        f << join({corpus[i].id, std::to_string(corpus[i].space.depth()), std::to_string(row.r),
                   std::to_string(row.p), format_double(row.report.lhs),
                   format_double(row.report.rhs), format_double(row.report.ratio()),
                   show(row.report.holds)})
          << '\n';
        reports.push_back({corpus[i].id, row.report});
      }
  }
  Outcome o;
  finite_outcome(reports, out, o);
  o.details = {{"process", p.process}, {"left_jump", p.left_jump}};
  return o;
}

mc::EssSupProxy proxy_from(const std::string& name) {
  return name == "quantile" ? mc::EssSupProxy::quantile : mc::EssSupProxy::max;
}

mc::RhoGridOptions grid_options(const std::string& proxy, double delta, std::size_t n_inner,
                                std::size_t fine_steps, unsigned jobs) {
  mc::RhoGridOptions g;
  g.inner.n_inner = n_inner;
  g.inner.dt = 1.0 / static_cast<double>(fine_steps);
  g.inner.proxy = proxy_from(proxy);
  g.inner.delta = delta;
  g.inner.jobs = jobs;
  return g;
}

Outcome run_rho_grid(const ExperimentConfig& c, Output& out) {
  const auto& p = c.rho_grid;
  auto opts = grid_options(p.proxy, p.delta, p.n_inner, p.fine_steps, c.jobs);
  opts.x0 = p.x0;
  opts.flag_sigmas = p.flag_sigmas;
  const auto functional = mc::PathFunctional::integral(mc::Integrand::by_name(p.integrand));
  const auto est = mc::empirical_rho_grid(functional, p.grid, p.n_outer, opts, c.seed);

  std::vector<double> widths, values;
  {
    auto f = out.open("rho_grid.csv");
    f << "s,t,value,std_error\n";
    for (std::size_t i = 0; i < p.grid.size(); ++i)
      for (std::size_t j = i + 1; j < p.grid.size(); ++j) {
        f << join({format_double(p.grid[i]), format_double(p.grid[j]),
                   format_double(est.value(i, j)), format_double(est.std_error(i, j))})
          << '\n';
        if (est.value(i, j) > 0.0) {
          widths.push_back(1.0 / (p.grid[j] - p.grid[i]));
          values.push_back(est.value(i, j));
        }
      }
  }
  {
    auto f = out.open("monotone_flags.csv");
    f << "s_outer,t_outer,s_inner,t_inner,excess_sigmas\n";
    for (const auto& m : est.monotone_flags)
      f << join({format_double(p.grid[m.s_outer]), format_double(p.grid[m.t_outer]),
                 format_double(p.grid[m.s_inner]), format_double(p.grid[m.t_inner]),
                 format_double(m.excess_sigmas)})
        << '\n';
  }

  Outcome o;
  std::vector<std::string> notes;
  const auto fit = try_fit(widths, values, notes);
  std::vector<BandRow> rows;
  rows.push_back(slope_band("alpha", fit, -kInf, kInf));
  if (!fit) rows.back().holds = true;
  // Diagnostic only: the deterministic-time proxy need not be monotone in s.
  rows.push_back(band("monotone_flags", static_cast<double>(est.monotone_flags.size()), 0.0, 0,
                      0.0, kInf));
  {
    auto f = out.open("summary.csv");
    write_band_csv(f, rows);
  }
  band_failures(rows, o);
  o.table = band_table(rows);
  o.details = {{"integrand", p.integrand},
               {"proxy", p.proxy},
               {"n_outer", p.n_outer},
               {"n_inner", p.n_inner},
               {"dt", opts.inner.dt},
               {"seed_rule", "outer Z_i from derive_seed(seed, 0, i); inner paths from "
                             "derive_seed(seed + 1, i, j)"},
               {"notes", notes}};
  return o;
}

// Delta-method standard error of m4 / (2 m2^2) from the per-path samples.
double gamma_ratio_stderr(const std::vector<double>& d, double m2, double m4) {
  if (d.size() < 2 || !(m2 > 0.0)) return kNan;
  const double ratio = m4 / (2.0 * m2 * m2);
  std::vector<double> infl(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double p2 = d[i] * d[i];
    infl[i] = p2 * p2 / (2.0 * m2 * m2) - 2.0 * ratio * p2 / m2;
  }
  return mc::mean_estimate(infl).std_error;
}

Outcome run_davie(const ExperimentConfig& c, Output& out, std::ostream* log) {
  const auto& p = c.davie;
  mc::EnsembleShape shape;
  shape.n_paths = p.n_paths;
  shape.n_steps = p.n_steps;
  shape.seed = c.seed;
  const auto ensemble = mc::PathEnsemble::streamed(shape);
  const auto samples = schemes::davie_functional(mc::Integrand::by_name(p.integrand), p.xs,
                                                 ensemble, p.test_mode, c.jobs);

  Outcome o;
  std::vector<BandRow> rows;
  std::vector<double> inv_x, m2s;
  std::size_t clipped = 0;
  {
    auto f = out.open("davie.csv");
    f << "x,m2,m2_std_error,m4,m4_std_error,gamma_ratio,gamma_ratio_std_error,clipped\n";
    for (const auto& s : samples) {
      const auto m = schemes::davie_moments(s);
      const double ratio_se = gamma_ratio_stderr(s.samples, m.m2.value, m.m4.value);
      f << join({format_double(s.x), format_double(m.m2.value), format_double(m.m2.std_error),
                 format_double(m.m4.value), format_double(m.m4.std_error),
                 format_double(m.gamma_ratio), format_double(ratio_se), std::to_string(s.clipped)})
        << '\n';
      clipped += s.clipped;
      if (s.x != 0.0 && m.m2.value > 0.0) {
        inv_x.push_back(1.0 / std::fabs(s.x));
        m2s.push_back(m.m2.value);
      }
      rows.push_back(band("gamma_ratio@x=" + format_double(s.x), m.gamma_ratio, ratio_se, 0,
                          p.ratio_min, p.ratio_max));
    }
  }
  std::vector<std::string> notes;
  if (inv_x.size() >= 3) {
    rows.insert(rows.begin(), slope_band("m2_slope", try_fit(inv_x, m2s, notes), p.slope_min,
                                         p.slope_max));
  } else {
    notes.push_back("fewer than three nonzero shifts with positive E D^2; no slope fitted");
  }
  if (clipped > 0) {
    const std::string warn = "g exceeded [-1, 1] and was clipped " + std::to_string(clipped) + " times";
    notes.push_back(warn);
    if (log) *log << "warning: " << warn << '\n';
  }
  {
    auto f = out.open("summary.csv");
    write_band_csv(f, rows);
  }
  {
    auto f = out.open("ensemble.json");
    f << ensemble.metadata().dump(2) << '\n';
  }
  band_failures(rows, o);
  o.table = band_table(rows);
  o.details = {{"integrand", p.integrand}, {"test_mode", p.test_mode}, {"notes", notes}};
  return o;
}

Outcome run_quadrature(const ExperimentConfig& c, Output& out, std::ostream* log) {
  const auto& p = c.quadrature;
  const auto opts = grid_options(p.proxy, p.delta, p.n_inner, p.fine_steps, c.jobs);
  const auto f_int = mc::Integrand::by_name(p.integrand);

  std::vector<double> ns, proxies;
  auto grid_csv = out.open("quadrature_grid.csv");
  grid_csv << "n,s,t,value,std_error\n";
  auto proxy_csv = out.open("quadrature.csv");
  proxy_csv << "n,proxy,std_error,s,t\n";
  for (std::size_t n : p.ns) {
    if (log) *log << "quadrature: n = " << n << '\n';
    const auto functional = mc::PathFunctional::quadrature_error(f_int, n);
    // Common random numbers across n.
    const auto est = mc::empirical_rho_grid(functional, p.grid, p.n_outer, opts, c.seed);
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < p.grid.size(); ++i)
      for (std::size_t j = i + 1; j < p.grid.size(); ++j) {
        grid_csv << join({std::to_string(n), format_double(p.grid[i]), format_double(p.grid[j]),
                          format_double(est.value(i, j)), format_double(est.std_error(i, j))})
                 << '\n';
        if (est.value(i, j) > est.value(bi, bj)) bi = i, bj = j;
      }
    proxy_csv << join({std::to_string(n), format_double(est.value(bi, bj)),
                       format_double(est.std_error(bi, bj)), format_double(p.grid[bi]),
                       format_double(p.grid[bj])})
              << '\n';
    ns.push_back(static_cast<double>(n));
    proxies.push_back(est.value(bi, bj));
  }
  grid_csv.close();
  proxy_csv.close();

  Outcome o;
  std::vector<std::string> notes;
  std::vector<BandRow> rows{slope_band("rate", try_fit(ns, proxies, notes), p.slope_min, p.slope_max)};
  {
    auto f = out.open("summary.csv");
    write_band_csv(f, rows);
  }
  band_failures(rows, o);
  o.table = band_table(rows);
  o.details = {{"integrand", p.integrand}, {"proxy", p.proxy},   {"n_outer", p.n_outer},
               {"n_inner", p.n_inner},     {"dt", opts.inner.dt}, {"notes", notes}};
  return o;
}

void write_rate_table(std::ofstream f, const schemes::StrongErrorResult& r) {
  f << "n,mean_sup_error,stderr,L2,L4\n";
  for (const auto& row : r.rows)
    f << join({std::to_string(row.n), format_double(row.mean), format_double(row.std_error),
               format_double(row.l2), format_double(row.l4)})
      << '\n';
}

Outcome run_tamed_em(const ExperimentConfig& c, Output& out, std::ostream* log) {
  const auto& p = c.tamed_em;
  const auto model = schemes::SdeModel::named(p.model, p.sigma, p.x0, p.drift_constant);
  schemes::TamingPolicy taming{p.taming, p.taming_exponent, p.taming_log_power};
  mc::EnsembleShape shape;
  shape.n_paths = p.n_paths;
  shape.n_steps = p.fine_factor * *std::max_element(p.ns.begin(), p.ns.end());
  shape.seed = c.seed;
  const auto ensemble = mc::PathEnsemble::streamed(shape);

  if (log) *log << "tamed-em: model " << p.model << ", " << taming.describe() << '\n';
  const auto result = schemes::strong_error(model, taming, p.ns, p.fine_factor, ensemble, c.jobs);
  write_rate_table(out.open("strong_error.csv"), result);
  {
    auto f = out.open("taming.csv");
    f << "n,level,diagnostic\n";
    for (std::size_t n : p.ns) {
      const double dn = static_cast<double>(n);
      f << join({std::to_string(n), format_double(taming.level(dn)),
                 format_double(taming.diagnostic(dn))})
        << '\n';
    }
  }

  std::vector<BandRow> rows;
  rows.push_back(slope_band("slope", result.fit, p.slope_min, kInf));
  rows.push_back(band("nonincreasing", schemes::nonincreasing_within(result.rows, p.monotone_sigmas) ? 1.0 : 0.0,
                      0.0, 0, 1.0, 1.0));
  if (p.control) {
    const auto zero = schemes::SdeModel::named("zero", p.sigma, p.x0);
    const auto ctrl = schemes::strong_error(zero, taming, p.ns, p.fine_factor, ensemble, c.jobs);
    write_rate_table(out.open("control.csv"), ctrl);
    double worst = 0.0;
    for (const auto& row : ctrl.rows) worst = std::max(worst, row.mean);
    rows.push_back(band("control_error", worst, 0.0, 0, 0.0, 0.0));
  }
  {
    auto f = out.open("summary.csv");
    write_band_csv(f, rows);
  }
  {
    auto f = out.open("ensemble.json");
    f << ensemble.metadata().dump(2) << '\n';
  }

  Outcome o;
  band_failures(rows, o);
  o.table = band_table(rows);
  const auto ell = schemes::check_ellipticity(model, std::max(p.sigma * p.sigma, 1.0 / (p.sigma * p.sigma)),
                                              64, 10.0, 1.0, c.seed);
  o.details = {{"model", p.model},
               {"sigma", p.sigma},
               {"x0", p.x0},
               {"taming", taming.describe()},
               {"meshes", p.ns},
               {"reference_mesh", result.reference_mesh},
               {"ellipticity", {{"min_eigenvalue", ell.min_eigenvalue},
                                {"max_eigenvalue", ell.max_eigenvalue},
                                {"holds", ell.holds}}},
               {"sobolev_condition", "user assertion, not checked"}};
  return o;
}

}  // namespace

void write_band_csv(std::ostream& os, const std::vector<BandRow>& rows) {
  os << "check,value,std_error,dof,lower,upper,holds\n";
  for (const auto& r : rows)
    os << join({r.check, format_double(r.value), format_double(r.std_error), std::to_string(r.dof),
                format_double(r.lower), format_double(r.upper), show(r.holds)})
       << '\n';
}

namespace {

double parse_double_cell(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return kNan;
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return x;
}

}  // namespace

std::vector<BandRow> read_band_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "check,value,std_error,dof,lower,upper,holds")
    throw std::runtime_error("band csv: unexpected header");
  std::vector<BandRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("band csv: malformed row '" + line + "'");
    try {
      rows.push_back({cells[0], parse_double_cell(cells[1]), parse_double_cell(cells[2]),
                      std::stoi(cells[3]), parse_double_cell(cells[4]), parse_double_cell(cells[5]),
                      cells[6] == "true"});
    } catch (const std::logic_error&) {
      throw std::runtime_error("band csv: malformed row '" + line + "'");
    }
  }
  return rows;
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  RunResult result;
  auto& m = result.manifest;
  m.kind = kind_name(config.kind);
  m.config_hash = config_hash(config);
  m.tool_version = tool_version();
  m.seed = config.seed;
  m.config = canonical_config(config);
  m.started = utc_timestamp();

  Output out(config.out);
  if (log) *log << m.kind << ": seed " << config.seed << ", output " << config.out << '\n';
  Outcome o;
  switch (config.kind) {
    case ExperimentKind::verify_finite: o = run_verify_finite(config, out); break;
    case ExperimentKind::jn_check: o = run_jn_check(config, out); break;
    case ExperimentKind::rho_grid: o = run_rho_grid(config, out); break;
    case ExperimentKind::davie: o = run_davie(config, out, log); break;
    case ExperimentKind::quadrature: o = run_quadrature(config, out, log); break;
    case ExperimentKind::tamed_em: o = run_tamed_em(config, out, log); break;
  }

  m.finished = utc_timestamp();
  m.outputs = out.files();
  m.passed = o.failures.empty();
  m.details = std::move(o.details);
  write_manifest((out.dir() / "manifest.json").string(), m);
  result.failures = std::move(o.failures);
  result.table = std::move(o.table);
  return result;
}

}  // namespace bmo::cli
