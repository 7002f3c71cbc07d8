// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every failing criterion is listed with --expect-fail.
// Expected failures still print FAIL; a listed criterion that passes prints an
// extra note.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "bmo/analysis/corpus.hpp"
#include "bmo/analysis/suite.hpp"
#include "bmo/cli/config.hpp"
#include "bmo/cli/experiments.hpp"
#include "bmo/mc/ensemble.hpp"
#include "bmo/mc/estimators.hpp"
#include "bmo/schemes/quadrature.hpp"

namespace fs = std::filesystem;
using namespace bmo;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// The exact suite on the shared corpus, run once for criteria 1-4.
struct SuiteRun {
  std::vector<analysis::CheckSummary> summary;
  double seconds = 0.0;
};

SuiteRun run_corpus() {
  analysis::CorpusOptions co;
  co.n_cases = 200;
  co.min_depth = 1;
  co.max_depth = 4;
  co.branching = 2;
  co.seed = 20240601;
  const auto t0 = Clock::now();
  const auto corpus = analysis::make_corpus(co);
  analysis::SuiteOptions so;
  so.moment_orders = {1, 2, 3};
  so.jobs = 0;
  const auto reports = analysis::run_finite_suite(corpus, so);
  return {analysis::summarize(reports), seconds_since(t0)};
}

Outcome families(const SuiteRun& run, const std::vector<std::string>& names, double time_limit = INFINITY) {
  Outcome o{true, ""};
  for (const auto& name : names) {
    const analysis::CheckSummary* s = nullptr;
    for (const auto& row : run.summary)
      if (row.check == name) s = &row;
    if (!s) {
      o.pass = false;
      o.detail += name + " missing; ";
      continue;
    }
    if (s->violations > 0 || s->n_cases != 200) o.pass = false;
    o.detail += name + " " + std::to_string(s->violations) + "/" + std::to_string(s->n_cases) +
                (s->violations ? " (worst " + s->worst_case + ")" : "") + "; ";
  }
  if (run.seconds > time_limit) o.pass = false;
  o.detail += "suite " + fmt(run.seconds, 3) + " s";
  return o;
}

Outcome gaussian_oracles() {
  const auto t0 = Clock::now();
  Outcome o{true, ""};
  mc::ConditionalMomentOptions opt;
  opt.n_inner = 10000;
  opt.dt = 1.0 / 4096;
  opt.jobs = 0;
  const std::vector<double> x0{0.0};
  const auto cm = mc::markov_conditional_moment(mc::PathFunctional::integral(mc::Integrand::identity()), 0.0, 1.0,
                                                x0, opt, 5);
  const double oracle = std::sqrt(2.0 / (3.0 * M_PI));
  const double z = (cm.estimate.value - oracle) / cm.estimate.std_error;
  o.pass = std::abs(z) <= 3.0;
  o.detail = "E|int W| " + fmt(cm.estimate.value) + " vs " + fmt(oracle) + " (" + fmt(z, 2) + " se)";

  const auto ensemble = mc::PathEnsemble::streamed({10000, 4096, 1, 1.0, 6});
  for (std::size_t n : {4u, 16u, 64u}) {
    const auto v = schemes::quadrature_error_terminal(mc::Integrand::identity(), ensemble, n, 0);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
    const auto m = mc::mean_estimate(sq);
    const double exact = 1.0 / (3.0 * static_cast<double>(n * n));
    const double zn = (m.value - exact) / m.std_error;
    o.pass = o.pass && std::abs(zn) <= 3.0;
    o.detail += "; n=" + std::to_string(n) + " " + fmt(zn, 2) + " se";
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 120.0;
  o.detail += "; " + fmt(secs, 3) + " s";
  return o;
}

cli::RunResult run_config(const std::string& text, const fs::path& out, unsigned jobs) {
  auto c = cli::parse_config(text);
  c.out = out.string();
  c.jobs = jobs;
  return cli::run_experiment(c);
}

std::vector<cli::BandRow> bands(const fs::path& out) {
  std::ifstream in(out / "summary.csv");
  return cli::read_band_csv(in);
}

std::string band_text(const cli::BandRow& b) {
  return b.check + " " + fmt(b.value) + " +- " + fmt(b.std_error, 2) + " in [" + fmt(b.lower) + ", " +
         fmt(b.upper) + "] " + (b.holds ? "ok" : "out");
}

Outcome band_criterion(const std::string& config, const fs::path& out, double time_limit) {
  const auto t0 = Clock::now();
  const auto r = run_config(config, out, 0);
  const double secs = seconds_since(t0);
  Outcome o{r.passed() && secs < time_limit, ""};
  for (const auto& b : bands(out)) o.detail += band_text(b) + "; ";
  o.detail += fmt(secs, 3) + " s";
  return o;
}

const char* kDavie = R"([run]
kind = davie
seed = 101
[davie]
integrand = sign
n_paths = 100000
n_steps = 1000
xs = 0.05, 0.1, 0.2, 0.4
)";

const char* kQuadrature = R"([run]
kind = quadrature
seed = 202
[quadrature]
integrand = sign
ns = 8, 16, 32, 64, 128, 256
grid = 0, 0.25, 0.5, 0.75, 1
n_outer = 16
n_inner = 1000
fine_steps = 4096
proxy = max
)";

const char* kTamed = R"([run]
kind = tamed-em
seed = 303
[tamed-em]
model = sign
sigma = 1
ns = 8, 16, 32, 64, 128, 256
fine_factor = 64
n_paths = 4000
control = true
)";

// Small configs for the determinism criterion, one per experiment kind.
const std::vector<std::string> kSmall{
    "[run]\nkind = verify-finite\nseed = 1\n[verify-finite]\nn_cases = 20\nmax_depth = 3\n",
    "[run]\nkind = jn-check\nseed = 2\n[jn-check]\nn_cases = 20\nmax_depth = 3\n",
    "[run]\nkind = rho-grid\nseed = 3\n[rho-grid]\ngrid = 0, 0.5, 1\nn_outer = 4\nn_inner = 100\nfine_steps = 256\n",
    "[run]\nkind = davie\nseed = 4\n[davie]\nn_paths = 2000\nn_steps = 200\n",
    "[run]\nkind = quadrature\nseed = 5\n[quadrature]\nns = 4, 8, 16\ngrid = 0, 0.5, 1\nn_outer = 4\n"
    "n_inner = 50\nfine_steps = 256\n",
    "[run]\nkind = tamed-em\nseed = 6\n[tamed-em]\nns = 4, 8, 16\nfine_factor = 8\nn_paths = 200\n",
};

Outcome determinism(const fs::path& root) {
  Outcome o{true, ""};
  std::size_t files = 0;
  for (const auto& text : kSmall) {
    const auto kind = cli::parse_config(text).kind;
    const std::string name = cli::kind_name(kind);
    const fs::path a = root / (name + "_j1"), b = root / (name + "_j1_again"), c = root / (name + "_j8");
    const auto ra = run_config(text, a, 1);
    run_config(text, b, 1);
    run_config(text, c, 8);
    for (const auto& file : ra.manifest.outputs) {
      if (file.ends_with(".json")) continue;
      ++files;
      const std::string ref = slurp(a / file);
      if (ref != slurp(b / file) || ref != slurp(c / file)) {
        o.pass = false;
        o.detail += name + "/" + file + " differs; ";
      }
    }
  }
  o.detail += std::to_string(files) + " data files compared across 3 runs each";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string workdir = (fs::temp_directory_path() / "bmoforge_acceptance").string();
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--workdir", workdir, "Directory for experiment outputs");
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  app.add_option("--only", only, "Run these criteria only")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const fs::path root(workdir);
  fs::remove_all(root);
  fs::create_directories(root);
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int k) { return selected.empty() || selected.count(k); };

  std::optional<SuiteRun> suite;
  auto corpus = [&]() -> const SuiteRun& {
    if (!suite) suite = run_corpus();
    return *suite;
  };

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return families(corpus(), {"jn_moment"}, 120.0); }},
      {2, [&] { return families(corpus(), {"garsia", "energy"}); }},
      {3, [&] {
         return families(corpus(), {"jump_equals_kappa", "kappa_le_rho", "stopping_pairs_2b3c", "maximal_11rho",
                                    "rho_monotone", "rho_triangle", "w_superadditive", "v1"});
       }},
      {4, [&] { return families(corpus(), {"khasminskii", "exp_vmoa"}); }},
      {5, [&] { return gaussian_oracles(); }},
      {6, [&] { return band_criterion(kDavie, root / "davie", 300.0); }},
      {7, [&] { return band_criterion(kQuadrature, root / "quadrature", 600.0); }},
      {8, [&] { return band_criterion(kTamed, root / "tamed-em", 600.0); }},
      {9, [&] { return determinism(root / "determinism"); }},
  };

  int unexpected = 0;
  for (const auto& [k, fn] : criteria) {
    if (!wanted(k)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.detail << std::endl;
    if (!o.pass && !expected.count(k)) ++unexpected;
    if (o.pass && expected.count(k)) std::cout << "note: criterion " << k << " was expected to fail" << std::endl;
  }
  std::cout << (unexpected ? "unexpected failures: " + std::to_string(unexpected) : "no unexpected failures")
            << std::endl;
  return unexpected ? 1 : 0;
}
