#include "bmo/cli/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bmo/analysis/report.hpp"
#include "bmo/error.hpp"

namespace bmo::cli {

namespace {

constexpr ExperimentKind kAllKinds[] = {
    ExperimentKind::verify_finite, ExperimentKind::rho_grid,   ExperimentKind::jn_check,
    ExperimentKind::davie,         ExperimentKind::quadrature, ExperimentKind::tamed_em};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(raw);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

template <class T>
bool parse_integer(const std::string& s, T& out) {
  if (s.empty() || s[0] == '-' || s[0] == '+') return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_value(const std::string& s, std::uint64_t& out) { return parse_integer(s, out); }
bool parse_value(const std::string& s, unsigned& out) { return parse_integer(s, out); }

bool parse_value(const std::string& s, int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_value(const std::string& s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_value(const std::string& s, bool& out) {
  if (s == "true") return out = true, true;
  if (s == "false") return out = false, true;
  return false;
}

bool parse_value(const std::string& s, std::string& out) {
  out = s;
  return true;
}

template <class T>
bool parse_value(const std::string& s, std::vector<T>& out) {
  std::vector<T> v;
  for (const auto& item : split_list(s)) {
    T x{};
    if (!parse_value(item, x)) return false;
    v.push_back(x);
  }
  out = std::move(v);
  return true;
}

std::string show(double x) { return analysis::format_double(x); }
std::string show(bool x) { return x ? "true" : "false"; }
template <class T>
  requires std::is_integral_v<T>
std::string show(T x) {
  return std::to_string(x);
}
template <class T>
std::string show(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + show(v[i]);
  return out;
}

template <class T>
bool in_range(T x, double lo, double hi) {
  return static_cast<double>(x) >= lo && static_cast<double>(x) <= hi;
}
bool in_range(const std::string&, double, double) { return true; }
template <class T>
bool in_range(const std::vector<T>& v, double lo, double hi) {
  return !v.empty() && std::all_of(v.begin(), v.end(), [&](T x) { return in_range(x, lo, hi); });
}

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

class Reader {
 public:
  Reader(std::string section, Section* entries, std::vector<std::string>& errors)
      : section_(std::move(section)), entries_(entries), errors_(errors) {}

  template <class T>
  void operator()(const char* key, T& ref, double lo, double hi) {
    const Entry* e = take(key);
    if (!e) return;
    T parsed{};
    if (!parse_value(e->value, parsed)) {
      fail(key, *e, "cannot parse '" + e->value + "'");
    } else if (!in_range(parsed, lo, hi)) {
      fail(key, *e, "value " + e->value + " outside [" + show(lo) + ", " + show(hi) + "]");
    } else {
      ref = std::move(parsed);
    }
  }

  void operator()(const char* key, bool& ref) {
    const Entry* e = take(key);
    if (e && !parse_value(e->value, ref)) fail(key, *e, "expected true or false");
  }

  void choice(const char* key, std::string& ref, std::initializer_list<const char*> options) {
    const Entry* e = take(key);
    if (!e) return;
    for (const char* o : options)
      if (e->value == o) {
        ref = e->value;
        return;
      }
    std::string allowed;
    for (const char* o : options) allowed += (allowed.empty() ? "" : ", ") + std::string(o);
    fail(key, *e, "'" + e->value + "' is not one of {" + allowed + "}");
  }

  bool has(const char* key) const { return entries_ && entries_->count(key); }

  void report_unknown() const {
    if (!entries_) return;
    for (const auto& [key, e] : *entries_)
      if (!used_.count(key))
        errors_.push_back(location(e) + "unknown key '" + key + "' in [" + section_ + "]");
  }

 private:
  const Entry* take(const char* key) {
    if (!entries_) return nullptr;
    auto it = entries_->find(key);
    if (it == entries_->end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }

  static std::string location(const Entry& e) {
    return e.line > 0 ? "line " + std::to_string(e.line) + ": " : "";
  }

  void fail(const char* key, const Entry& e, const std::string& what) {
    errors_.push_back(location(e) + "[" + section_ + "] " + key + ": " + what);
  }

  std::string section_;
  Section* entries_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  template <class T>
  void operator()(const char* key, T& ref, double = 0, double = 0) {
    os_ << key << " = " << show(ref) << '\n';
  }
  void choice(const char* key, std::string& ref, std::initializer_list<const char*>) {
    os_ << key << " = " << ref << '\n';
  }

 private:
  std::ostream& os_;
};

constexpr double kMaxCount = 1e9;
constexpr double kMaxDouble = 1e12;

template <class V>
void visit(VerifyFiniteParams& p, V& v) {
  v("n_cases", p.n_cases, 1, 1e6);
  v("min_depth", p.min_depth, 1, 8);
  v("max_depth", p.max_depth, 1, 8);
  v("branching", p.branching, 2, 4);
  v("p", p.p, 1, 12);
  v("lambda_fractions", p.lambda_fractions, 1e-6, 0.999999);
  v("control_exponents", p.control_exponents, 1, 12);
  v("left_jump", p.left_jump);
}

template <class V>
void visit(JnCheckParams& p, V& v) {
  v("n_cases", p.n_cases, 1, 1e6);
  v("min_depth", p.min_depth, 1, 8);
  v("max_depth", p.max_depth, 1, 8);
  v("branching", p.branching, 2, 4);
  v("p", p.p, 1, 12);
  v.choice("process", p.process, {"random", "constant"});
  v("left_jump", p.left_jump);
}

template <class V>
void visit(RhoGridParams& p, V& v) {
  v.choice("integrand", p.integrand, {"zero", "one", "identity", "x", "sign"});
  v("grid", p.grid, 0, kMaxDouble);
  v("n_outer", p.n_outer, 1, kMaxCount);
  v("n_inner", p.n_inner, 2, kMaxCount);
  v("fine_steps", p.fine_steps, 1, kMaxCount);
  v.choice("proxy", p.proxy, {"max", "quantile"});
  v("delta", p.delta, 1e-9, 0.5);
  v("x0", p.x0, -kMaxDouble, kMaxDouble);
  v("flag_sigmas", p.flag_sigmas, 0, 100);
}

template <class V>
void visit(DavieParams& p, V& v) {
  v.choice("integrand", p.integrand, {"zero", "one", "identity", "x", "sign"});
  v("n_paths", p.n_paths, 2, kMaxCount);
  v("n_steps", p.n_steps, 1, kMaxCount);
  v("xs", p.xs, -kMaxDouble, kMaxDouble);
  v("test_mode", p.test_mode);
  v("slope_min", p.slope_min, -kMaxDouble, kMaxDouble);
  v("slope_max", p.slope_max, -kMaxDouble, kMaxDouble);
  v("ratio_min", p.ratio_min, 0, kMaxDouble);
  v("ratio_max", p.ratio_max, 0, kMaxDouble);
}

template <class V>
void visit(QuadratureParams& p, V& v) {
  v.choice("integrand", p.integrand, {"zero", "one", "identity", "x", "sign"});
  v("ns", p.ns, 1, kMaxCount);
  v("grid", p.grid, 0, 1);
  v("n_outer", p.n_outer, 1, kMaxCount);
  v("n_inner", p.n_inner, 2, kMaxCount);
  v("fine_steps", p.fine_steps, 1, kMaxCount);
  v.choice("proxy", p.proxy, {"max", "quantile"});
  v("delta", p.delta, 1e-9, 0.5);
  v("slope_min", p.slope_min, -kMaxDouble, kMaxDouble);
  v("slope_max", p.slope_max, -kMaxDouble, kMaxDouble);
}

template <class V>
void visit(TamedEmParams& p, V& v) {
  v.choice("model", p.model, {"zero", "sign", "linear", "constant"});
  v("sigma", p.sigma, 0, kMaxDouble);
  v("x0", p.x0, -kMaxDouble, kMaxDouble);
  v("drift_constant", p.drift_constant, -kMaxDouble, kMaxDouble);
  v("ns", p.ns, 1, kMaxCount);
  v("fine_factor", p.fine_factor, 1, 1e6);
  v("n_paths", p.n_paths, 2, kMaxCount);
  v("taming", p.taming);
  v("taming_exponent", p.taming_exponent, 0, 0.5);
  v("taming_log_power", p.taming_log_power, 0, 10);
  v("control", p.control);
  v("slope_min", p.slope_min, -kMaxDouble, kMaxDouble);
  v("monotone_sigmas", p.monotone_sigmas, 0, 100);
}

template <class V>
void visit_kind(ExperimentConfig& c, V& v) {
  switch (c.kind) {
    case ExperimentKind::verify_finite: return visit(c.verify_finite, v);
    case ExperimentKind::jn_check: return visit(c.jn_check, v);
    case ExperimentKind::rho_grid: return visit(c.rho_grid, v);
    case ExperimentKind::davie: return visit(c.davie, v);
    case ExperimentKind::quadrature: return visit(c.quadrature, v);
    case ExperimentKind::tamed_em: return visit(c.tamed_em, v);
  }
}

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

template <class T>
bool distinct(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

void cross_checks(const ExperimentConfig& c, std::vector<std::string>& errors) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) errors.push_back("[" + std::string(kind_name(c.kind)) + "] " + what);
  };
  switch (c.kind) {
    case ExperimentKind::verify_finite:
      require(c.verify_finite.min_depth <= c.verify_finite.max_depth, "min_depth exceeds max_depth");
      break;
    case ExperimentKind::jn_check:
      require(c.jn_check.min_depth <= c.jn_check.max_depth, "min_depth exceeds max_depth");
      break;
    case ExperimentKind::rho_grid:
      require(c.rho_grid.grid.size() >= 2 && strictly_increasing(c.rho_grid.grid),
              "grid needs at least two strictly increasing times");
      break;
    case ExperimentKind::davie:
      require(c.davie.slope_min <= c.davie.slope_max, "slope_min exceeds slope_max");
      require(c.davie.ratio_min <= c.davie.ratio_max, "ratio_min exceeds ratio_max");
      require(distinct(c.davie.xs), "xs must be distinct");
      require(std::find(c.davie.xs.begin(), c.davie.xs.end(), 0.0) == c.davie.xs.end(),
              "xs must be nonzero");
      break;
    case ExperimentKind::quadrature:
      require(c.quadrature.slope_min <= c.quadrature.slope_max, "slope_min exceeds slope_max");
      require(c.quadrature.grid.size() >= 2 && strictly_increasing(c.quadrature.grid),
              "grid needs at least two strictly increasing times");
      require(distinct(c.quadrature.ns), "ns must be distinct");
      break;
    case ExperimentKind::tamed_em:
      require(distinct(c.tamed_em.ns), "ns must be distinct");
      break;
  }
}

Document read_text(const std::string& text, std::vector<std::string>& errors) {
  Document doc;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + "malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    if (section.empty()) {
      errors.push_back(where + "key outside any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    if (!doc[section].emplace(key, Entry{trim(line.substr(eq + 1)), line_no}).second)
      errors.push_back(where + "duplicate key '" + key + "' in [" + section + "]");
  }
  return doc;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return analysis::format_double(v.get<double>());
  return v.dump();
}

Document read_json(const std::string& text, std::vector<std::string>& errors) {
  Document doc;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    errors.push_back(std::string("invalid JSON: ") + e.what());
    return doc;
  }
  if (!j.is_object()) {
    errors.push_back("JSON config must be an object of sections");
    return doc;
  }
  for (const auto& [name, body] : j.items()) {
    if (!body.is_object()) {
      errors.push_back("section '" + name + "' must be an object");
      continue;
    }
    auto& section = doc[name];
    for (const auto& [key, value] : body.items()) {
      if (value.is_object() || value.is_null()) {
        errors.push_back("[" + name + "] " + key + ": unsupported value");
      } else if (value.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < value.size(); ++i)
          joined += (i ? ", " : "") + json_scalar(value[i]);
        section[key] = {joined, 0};
      } else {
        section[key] = {json_scalar(value), 0};
      }
    }
  }
  return doc;
}

std::string write_config(const ExperimentConfig& config, bool with_runtime) {
  ExperimentConfig c = config;
  std::ostringstream os;
  os << "[run]\nkind = " << kind_name(c.kind) << "\nseed = " << c.seed << '\n';
  if (with_runtime) os << "out = " << c.out << "\njobs = " << c.jobs << '\n';
  os << "\n[" << kind_name(c.kind) << "]\n";
  Writer w(os);
  visit_kind(c, w);
  return os.str();
}

}  // namespace

const char* kind_name(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::verify_finite: return "verify-finite";
    case ExperimentKind::rho_grid: return "rho-grid";
    case ExperimentKind::jn_check: return "jn-check";
    case ExperimentKind::davie: return "davie";
    case ExperimentKind::quadrature: return "quadrature";
    case ExperimentKind::tamed_em: return "tamed-em";
  }
  return "?";
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) noexcept {
  for (ExperimentKind k : kAllKinds)
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::string> errors;
  const auto first = text.find_first_not_of(" \t\r\n");
  Document doc = first != std::string::npos && text[first] == '{' ? read_json(text, errors)
                                                                  : read_text(text, errors);
  ExperimentConfig c;
  Section* run = doc.count("run") ? &doc["run"] : nullptr;
  if (!run) errors.push_back("missing section [run]");

  Reader rr("run", run, errors);
  std::string kind;
  rr.choice("kind", kind,
            {"verify-finite", "rho-grid", "jn-check", "davie", "quadrature", "tamed-em"});
  if (run && !run->count("kind")) errors.push_back("[run] kind: missing required field");
  if (run && !run->count("seed")) errors.push_back("[run] seed: missing required field");
  rr("seed", c.seed, 0, 1.9e19);
  rr("out", c.out, 0, 0);
  rr("jobs", c.jobs, 0, 4096);
  rr.report_unknown();
  if (run && run->count("out") && c.out.empty()) errors.push_back("[run] out: must not be empty");

  const auto parsed_kind = kind_from_name(kind);
  if (parsed_kind) c.kind = *parsed_kind;
  for (auto& [name, section] : doc) {
    if (name == "run") continue;
    if (!kind_from_name(name)) {
      errors.push_back("unknown section [" + name + "]");
    } else if (parsed_kind && name != kind) {
      errors.push_back("section [" + name + "] does not match kind " + kind);
    }
  }
  if (parsed_kind) {
    const std::string name = kind_name(c.kind);
    Reader kr(name, doc.count(name) ? &doc[name] : nullptr, errors);
    visit_kind(c, kr);
    kr.report_unknown();
    cross_checks(c, errors);
  }

  if (!errors.empty()) {
    std::string msg = "invalid config (" + std::to_string(errors.size()) + " problem" +
                      (errors.size() == 1 ? "" : "s") + "):";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return c;
}

// `out` is written as-is; the text format has no quoting, so a path holding
// '#' or ';' does not survive a round trip.
std::string serialize_config(const ExperimentConfig& config) { return write_config(config, true); }

std::string canonical_config(const ExperimentConfig& config) {
  return write_config(config, false);
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = canonical_config(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::uint64_t resolve_seed(std::uint64_t config_seed, const char* env_value,
                           std::optional<std::uint64_t> flag_seed) {
  if (flag_seed) return *flag_seed;
  if (env_value && *env_value) {
    std::uint64_t s = 0;
    if (!parse_integer(trim(env_value), s))
      throw ValidationError(std::string("BMOFORGE_SEED is not an unsigned integer: ") + env_value);
    return s;
  }
  return config_seed;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bmo::cli
