#pragma once
// Experiment configuration: sectioned key/value text or JSON.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmo::cli {

enum class ExperimentKind { verify_finite, rho_grid, jn_check, davie, quadrature, tamed_em };

const char* kind_name(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> kind_from_name(const std::string& name) noexcept;

struct VerifyFiniteParams {
  std::size_t n_cases = 200;
  int min_depth = 1;
  int max_depth = 4;
  int branching = 2;
  std::vector<int> p{1, 2, 3};
  std::vector<double> lambda_fractions{0.25, 0.5, 0.9};
  std::vector<double> control_exponents{1.0, 2.0};
  bool left_jump = true;
  bool operator==(const VerifyFiniteParams&) const = default;
};

struct JnCheckParams {
  std::size_t n_cases = 50;
  int min_depth = 1;
  int max_depth = 4;
  int branching = 2;
  std::vector<int> p{1, 2, 3};
  /// "random" (the corpus processes) or "constant".
  std::string process = "random";
  bool left_jump = true;
  bool operator==(const JnCheckParams&) const = default;
};

struct RhoGridParams {
  std::string integrand = "sign";
  std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t n_outer = 16;
  std::size_t n_inner = 1000;
  std::size_t fine_steps = 4096;
  std::string proxy = "max";
  double delta = 0.01;
  double x0 = 0.0;
  double flag_sigmas = 3.0;
  bool operator==(const RhoGridParams&) const = default;
};

struct DavieParams {
  std::string integrand = "sign";
  std::size_t n_paths = 100000;
  std::size_t n_steps = 1000;
  std::vector<double> xs{0.05, 0.1, 0.2, 0.4};
  bool test_mode = false;
  double slope_min = 1.8;
  double slope_max = 2.2;
  double ratio_min = 0.5;
  double ratio_max = 2.0;
  bool operator==(const DavieParams&) const = default;
};

struct QuadratureParams {
  std::string integrand = "sign";
  std::vector<std::size_t> ns{8, 16, 32, 64, 128, 256};
  std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t n_outer = 16;
  std::size_t n_inner = 1000;
  std::size_t fine_steps = 4096;
  std::string proxy = "max";
  double delta = 0.01;
  double slope_min = 0.4;
  double slope_max = 0.6;
  bool operator==(const QuadratureParams&) const = default;
};

struct TamedEmParams {
  /// "zero", "sign", "linear" or "constant".
  std::string model = "sign";
  double sigma = 1.0;
  double x0 = 0.0;
  double drift_constant = 0.0;
  std::vector<std::size_t> ns{8, 16, 32, 64, 128, 256};
  std::size_t fine_factor = 64;
  std::size_t n_paths = 4000;
  bool taming = true;
  double taming_exponent = 0.5;
  double taming_log_power = 1.0;
  bool control = true;
  double slope_min = 0.4;
  double monotone_sigmas = 1.0;
  bool operator==(const TamedEmParams&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify_finite;
  std::uint64_t seed = 0;
  std::string out = "out";
  unsigned jobs = 1;
  VerifyFiniteParams verify_finite;
  JnCheckParams jn_check;
  RhoGridParams rho_grid;
  DavieParams davie;
  QuadratureParams quadrature;
  TamedEmParams tamed_em;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Text form:
///
///   [run]
///   kind = davie
///   seed = 7
///   [davie]
///   xs = 0.05, 0.1
///
/// Only [run] and the section named by `kind` may appear. Text starting with
/// '{' is read as JSON with the same sections as objects. Throws
/// ValidationError listing every violation.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text: [run] then the kind's section, every key in fixed order.
std::string serialize_config(const ExperimentConfig& config);

/// serialize_config without `out` and `jobs`, which never change outputs.
std::string canonical_config(const ExperimentConfig& config);

/// Lowercase hex SHA-256 of canonical_config.
std::string config_hash(const ExperimentConfig& config);

/// Precedence: flag over environment over config. A malformed environment
/// value throws ValidationError.
std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value,
                           std::optional<std::uint64_t> flag_seed);

ExperimentConfig load_config(const std::string& path);

}  // namespace bmo::cli
