#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bmo/cli/config.hpp"
#include "bmo/cli/experiments.hpp"
#include "bmo/cli/manifest.hpp"
#include "bmo/cli/report.hpp"
#include "bmo/error.hpp"

using namespace bmo;
using namespace bmo::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bmoforge_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig small(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  c.seed = 11;
  c.verify_finite.n_cases = 6;
  c.verify_finite.max_depth = 3;
  c.jn_check.n_cases = 6;
  c.jn_check.max_depth = 3;
  c.rho_grid.grid = {0.0, 0.5, 1.0};
  c.rho_grid.n_outer = 3;
  c.rho_grid.n_inner = 40;
  c.rho_grid.fine_steps = 64;
  c.davie.n_paths = 400;
  c.davie.n_steps = 100;
  c.quadrature.ns = {4, 8, 16};
  c.quadrature.grid = {0.0, 0.5, 1.0};
  c.quadrature.n_outer = 3;
  c.quadrature.n_inner = 30;
  c.quadrature.fine_steps = 64;
  c.tamed_em.ns = {4, 8, 16};
  c.tamed_em.fine_factor = 4;
  c.tamed_em.n_paths = 60;
  return c;
}

}  // namespace

TEST(Config, MinimalVerifyFiniteGetsDefaults) {
  const auto c = parse_config("[run]\nkind = verify-finite\nseed = 3\n");
  EXPECT_EQ(c.kind, ExperimentKind::verify_finite);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.out, "out");
  EXPECT_EQ(c.jobs, 1u);
  EXPECT_EQ(c.verify_finite, VerifyFiniteParams{});
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config("[run]\nkind = verify-finite\nseed = 3\n[verify-finite]\ndpeth = 3\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("dpeth"), std::string::npos) << e.what();
  }
}

TEST(Config, EveryViolationListed) {
  try {
    parse_config("[run]\nkind = davie\n[davie]\nn_paths = 0\nxs = 0.1, 0.1\ncolour = red\n");
    FAIL();
  } catch (const ValidationError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("seed"), std::string::npos) << m;
    EXPECT_NE(m.find("n_paths"), std::string::npos) << m;
    EXPECT_NE(m.find("xs"), std::string::npos) << m;
    EXPECT_NE(m.find("colour"), std::string::npos) << m;
  }
  EXPECT_THROW(parse_config("[run]\nkind = davie\nseed = 1\n[quadrature]\nns = 8, 16, 32\n"), ValidationError);
  EXPECT_THROW(parse_config("[run]\nkind = banana\nseed = 1\n"), ValidationError);
}

TEST(Config, RoundTripEveryKind) {
  for (auto kind : {ExperimentKind::verify_finite, ExperimentKind::rho_grid, ExperimentKind::jn_check,
                    ExperimentKind::davie, ExperimentKind::quadrature, ExperimentKind::tamed_em}) {
    auto c = small(kind);
    c.out = "somewhere/else";
    c.jobs = 3;
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    EXPECT_EQ(serialize_config(back), text) << kind_name(kind);
    EXPECT_EQ(back.kind, c.kind);
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_EQ(back.out, c.out);
    EXPECT_EQ(back.jobs, c.jobs);
  }
  const auto d = small(ExperimentKind::davie);
  EXPECT_EQ(parse_config(serialize_config(d)).davie, d.davie);
}

TEST(Config, JsonInput) {
  const auto c = parse_config(R"({"run": {"kind": "davie", "seed": 5}, "davie": {"xs": [0.1, 0.2, 0.3]}})");
  EXPECT_EQ(c.kind, ExperimentKind::davie);
  EXPECT_EQ(c.davie.xs, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_THROW(parse_config(R"({"run": {"kind": "davie", "seed": 5}, "davie": {"xz": 1}})"), ValidationError);
}

TEST(Config, SeedPrecedence) {
  EXPECT_EQ(resolve_seed(1, nullptr, std::nullopt), 1u);
  EXPECT_EQ(resolve_seed(1, "2", std::nullopt), 2u);
  EXPECT_EQ(resolve_seed(1, "2", 3), 3u);
  EXPECT_THROW(resolve_seed(1, "two", std::nullopt), ValidationError);
}

TEST(Config, HashIgnoresOutAndJobs) {
  auto a = small(ExperimentKind::quadrature);
  auto b = a;
  b.out = "elsewhere";
  b.jobs = 8;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
  EXPECT_EQ(config_hash(a).find_first_not_of("0123456789abcdef"), std::string::npos);
  b.seed = 12;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Manifest, RoundTrip) {
  RunManifest m;
  m.kind = "davie";
  m.config_hash = "ab";
  m.tool_version = tool_version();
  m.seed = 9;
  m.started = utc_timestamp();
  m.finished = m.started;
  m.outputs = {"summary.csv"};
  m.passed = true;
  m.details = {{"k", 1}};
  const auto back = manifest_from_json(to_json(m));
  EXPECT_EQ(back.kind, m.kind);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.details, m.details);
  EXPECT_THROW(read_manifest((scratch("nomanifest") / "manifest.json").string()), std::runtime_error);
}

TEST(BandCsv, RoundTrip) {
  const std::vector<BandRow> rows{{"slope", 0.51, 0.02, 4, 0.4, 0.6, true},
                                  {"ratio", 3.0, 0.0, 0, 0.5, 2.0, false}};
  std::stringstream ss;
  write_band_csv(ss, rows);
  const auto back = read_band_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].check, "slope");
  EXPECT_EQ(back[0].value, 0.51);
  EXPECT_EQ(back[0].dof, 4);
  EXPECT_FALSE(back[1].holds);
}

TEST(Run, VerifyFiniteDepthThreeFiftyCases) {
  auto c = small(ExperimentKind::verify_finite);
  c.verify_finite.n_cases = 50;
  c.verify_finite.min_depth = 3;
  c.verify_finite.max_depth = 3;
  c.out = scratch("vf").string();
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.failures.empty());
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_TRUE(fs::exists(fs::path(c.out) / "manifest.json"));
  EXPECT_EQ(slurp(fs::path(c.out) / "violations.jsonl"), "");
}

TEST(Run, JnCheckConstantProcessesHaveZeroLhs) {
  auto c = small(ExperimentKind::jn_check);
  c.jn_check.process = "constant";
  c.out = scratch("jnc").string();
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.passed());
  std::ifstream in(fs::path(c.out) / "jn.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "case,depth,r,p,lhs,rhs,ratio,holds");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(std::stod(cells[4]), 0.0) << line;
    ++rows;
  }
  EXPECT_GT(rows, 0u);
}

TEST(Run, OutputsIdenticalAcrossJobs) {
  for (auto kind : {ExperimentKind::verify_finite, ExperimentKind::rho_grid, ExperimentKind::jn_check,
                    ExperimentKind::davie, ExperimentKind::quadrature, ExperimentKind::tamed_em}) {
    auto a = small(kind);
    auto b = a;
    a.out = scratch(std::string("j1_") + kind_name(kind)).string();
    b.out = scratch(std::string("j8_") + kind_name(kind)).string();
    b.jobs = 8;
    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    EXPECT_EQ(ra.manifest.outputs, rb.manifest.outputs);
    EXPECT_EQ(ra.manifest.config_hash, rb.manifest.config_hash);
    std::size_t compared = 0;
    for (const auto& name : ra.manifest.outputs) {
      EXPECT_EQ(slurp(fs::path(a.out) / name), slurp(fs::path(b.out) / name)) << kind_name(kind) << " " << name;
      ++compared;
    }
    EXPECT_GT(compared, 0u);
  }
}

TEST(Report, EmptyListHasHeaderOnly) {
  std::stringstream ss;
  write_aggregate_csv(ss, report_summary({}));
  EXPECT_EQ(ss.str(),
            "kind,check,n_runs,n_cases,violations,worst_ratio,worst_case,estimate,std_error,dof,ci_low,ci_high\n");
}

TEST(Report, OneRowPerCheck) {
  auto c = small(ExperimentKind::verify_finite);
  c.out = scratch("rep_vf").string();
  run_experiment(c);
  const auto rows = report_summary({(fs::path(c.out) / "manifest.json").string()});
  std::ifstream in(fs::path(c.out) / "summary.csv");
  std::string line;
  std::size_t checks = 0;
  std::getline(in, line);
  while (std::getline(in, line)) checks += !line.empty();
  EXPECT_EQ(rows.size(), checks);
  for (const auto& r : rows) EXPECT_EQ(r.n_runs, 1u);
}

TEST(Report, PooledDavieSlope) {
  std::vector<std::string> manifests;
  std::vector<double> v, se;
  for (std::uint64_t seed : {1u, 2u}) {
    auto c = small(ExperimentKind::davie);
    c.seed = seed;
    c.out = scratch("rep_davie" + std::to_string(seed)).string();
    run_experiment(c);
    manifests.push_back((fs::path(c.out) / "manifest.json").string());
    std::ifstream in(fs::path(c.out) / "summary.csv");
    for (const auto& b : read_band_csv(in))
      if (b.check == "m2_slope") {
        v.push_back(b.value);
        se.push_back(b.std_error);
      }
  }
  ASSERT_EQ(v.size(), 2u);
  const double w0 = 1 / (se[0] * se[0]), w1 = 1 / (se[1] * se[1]);
  const auto rows = report_summary(manifests);
  bool found = false;
  for (const auto& r : rows)
    if (r.check == "m2_slope") {
      found = true;
      EXPECT_EQ(r.n_runs, 2u);
      EXPECT_NEAR(r.estimate, (w0 * v[0] + w1 * v[1]) / (w0 + w1), 1e-12);
      EXPECT_NEAR(r.std_error, 1 / std::sqrt(w0 + w1), 1e-12);
      EXPECT_LT(r.ci_low, r.estimate);
      EXPECT_GT(r.ci_high, r.estimate);
    }
  EXPECT_TRUE(found);
}

TEST(Report, MissingFileIsNamed) {
  auto c = small(ExperimentKind::davie);
  c.out = scratch("rep_missing").string();
  run_experiment(c);
  fs::remove(fs::path(c.out) / "summary.csv");
  try {
    report_summary({(fs::path(c.out) / "manifest.json").string()});
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("summary.csv"), std::string::npos);
  }
}

TEST(Report, ConfidenceInterval) {
  const auto [lo, hi] = confidence_interval(1.0, 0.1, 0);
  EXPECT_NEAR(hi - 1.0, 0.1 * 1.959963984540054, 1e-12);
  EXPECT_NEAR(lo, 2.0 - hi, 1e-15);
  const auto [tlo, thi] = confidence_interval(0.0, 1.0, 4);
  EXPECT_NEAR(thi, 2.776445105197793, 1e-9);
  (void)tlo;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "vf.ini");
    cfg << "[run]\nkind = verify-finite\nseed = 4\n[verify-finite]\nn_cases = 4\nmax_depth = 2\n";
  }
  const std::string exe = BMOFORGE_EXE;
  const std::string out = (dir / "out").string();
  auto run = [](const std::string& cmd) { return WEXITSTATUS(std::system((cmd + " > /dev/null 2>&1").c_str())); };
  EXPECT_EQ(run(exe + " verify-finite --quiet --config " + (dir / "vf.ini").string() + " --out " + out), 0);
  EXPECT_EQ(run(exe + " report " + out + "/manifest.json --out " + (dir / "rep").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "rep" / "report.csv"));
  EXPECT_EQ(run(exe + " davie --config " + (dir / "vf.ini").string() + " --out " + out), 2);
  EXPECT_EQ(run(exe + " verify-finite --config " + (dir / "missing.ini").string()), 2);
}
