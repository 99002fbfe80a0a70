#ifndef PINLAB_HARNESS_CONFIG_HPP
#define PINLAB_HARNESS_CONFIG_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pinlab::harness {

inline constexpr std::string_view kVersion = "0.1.0";

/// Invalid experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 6> kExperiments = {
    "convergence", "concentration", "threshold-pinning", "threshold-polymer", "renewal-asymptotics",
    "subordinator-growth"};

struct ExperimentConfig {
  std::string experiment;
  std::vector<double> alpha{0.5};
  std::vector<double> gamma{0.5};
  double beta_hat = 1.0;
  /// beta_hat is a multiple of the continuum threshold of the disorder in use.
  bool beta_hat_relative = false;
  double h = 0.5;
  double c = 1.0;
  double rho = 0.0;
  double K_inf = 0.0;
  std::vector<std::size_t> N_list{64, 128, 256, 512, 1024, 2048};
  std::vector<std::size_t> k_list{256};
  std::size_t replicas = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "pinlab-out";
  double delta = 0.1;
  std::size_t n_samples = 2000;
  double q = 1.5;
  std::size_t grid_points = 31;
  std::size_t grid_refine = 10;
  std::size_t k_shift = 1;
  std::size_t n_max = 100000;

  [[nodiscard]] nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["alpha"] = alpha;
    j["gamma"] = gamma;
    j["beta_hat"] = beta_hat;
    j["beta_hat_relative"] = beta_hat_relative;
    j["h"] = h;
    j["c"] = c;
    j["rho"] = rho;
    j["K_inf"] = K_inf;
    j["N_list"] = N_list;
    j["k_list"] = k_list;
    j["replicas"] = replicas;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["delta"] = delta;
    j["n_samples"] = n_samples;
    j["q"] = q;
    j["grid_points"] = grid_points;
    j["grid_refine"] = grid_refine;
    j["k_shift"] = k_shift;
    j["n_max"] = n_max;
    return j;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::string cleaned = v;
  std::erase_if(cleaned, [](char ch) { return ch == '[' || ch == ']'; });
  std::vector<std::string> out;
  std::stringstream ss(cleaned);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    if (v.empty() || v.front() == '-') throw std::invalid_argument("negative");
    std::size_t pos = 0;
    const auto u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return u;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

inline void assign(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  auto doubles = [&] {
    std::vector<double> out;
    for (const auto& s : split_list(value)) out.push_back(to_double(key, s));
    if (out.empty()) throw ConfigError("config: key '" + key + "' needs at least one value");
    return out;
  };
  auto sizes = [&] {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(value)) out.push_back(static_cast<std::size_t>(to_uint(key, s)));
    if (out.empty()) throw ConfigError("config: key '" + key + "' needs at least one value");
    return out;
  };
  if (key == "experiment") cfg.experiment = value;
  else if (key == "alpha") cfg.alpha = doubles();
  else if (key == "gamma") cfg.gamma = doubles();
  else if (key == "beta_hat") cfg.beta_hat = to_double(key, value);
  else if (key == "beta_hat_relative") cfg.beta_hat_relative = to_bool(key, value);
  else if (key == "h") cfg.h = to_double(key, value);
  else if (key == "c") cfg.c = to_double(key, value);
  else if (key == "rho") cfg.rho = to_double(key, value);
  else if (key == "K_inf") cfg.K_inf = to_double(key, value);
  else if (key == "N_list") cfg.N_list = sizes();
  else if (key == "k_list" || key == "k") cfg.k_list = sizes();
  else if (key == "replicas") cfg.replicas = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "seed") cfg.seed = to_uint(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "delta") cfg.delta = to_double(key, value);
  else if (key == "n_samples") cfg.n_samples = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "q") cfg.q = to_double(key, value);
  else if (key == "grid_points") cfg.grid_points = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "grid_refine") cfg.grid_refine = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "k_shift") cfg.k_shift = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "n_max") cfg.n_max = static_cast<std::size_t>(to_uint(key, value));
  else throw ConfigError("config: unknown key '" + key + "'");
}

inline std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw ConfigError("config: unsupported JSON value " + v.dump());
}

}  // namespace detail

/// Parses flat `key = value` text (`#` comments, comma-separated lists) or a
/// JSON object with the same keys.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  const std::string body = detail::trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: JSON config must be an object");
    for (const auto& [key, v] : j.items()) {
      std::string value;
      if (v.is_array()) {
        for (const auto& item : v) value += (value.empty() ? "" : ",") + detail::json_scalar(item);
      } else {
        value = detail::json_scalar(v);
      }
      detail::assign(cfg, key, value);
    }
    return cfg;
  }
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) eq = line.find(':');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not of the form key = value");
    detail::assign(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Checks every parameter against the precondition of the module it feeds.
inline void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  const auto& e = cfg.experiment;
  if (std::find(kExperiments.begin(), kExperiments.end(), e) == kExperiments.end())
    fail("config: unknown experiment '" + e + "'");
  if (cfg.out_dir.empty()) fail("config: out_dir must be set");
  if (cfg.replicas < 1) fail("config: replicas must be >= 1");

  const bool pinning_disorder = e == "convergence" || e == "concentration" || e == "threshold-pinning" ||
                                e == "subordinator-growth";
  if (pinning_disorder)
    for (double a : cfg.alpha)
      if (!(a > 0 && a < 1)) fail("disorder: alpha must lie in (0,1), got " + std::to_string(a));
  if (e == "threshold-polymer")
    for (double a : cfg.alpha)
      if (!(a > 0 && a < 2)) fail("polymer: alpha must lie in (0,2), got " + std::to_string(a));
  if (e != "threshold-polymer" && e != "subordinator-growth")
    for (double g : cfg.gamma)
      if (!(g > 0 && g < 1)) fail("geometry: gamma must lie in (0,1), got " + std::to_string(g));
  if ((e == "convergence" || e == "concentration") && !(cfg.beta_hat > 0))
    fail("varmax: beta_hat must be > 0");
  if (e == "convergence" || e == "concentration") {
    if (cfg.N_list.empty()) fail("config: N_list must not be empty");
    for (auto N : cfg.N_list)
      if (N < 2) fail("disorder: sample_coupled needs N >= 2");
  }
  if (e != "renewal-asymptotics") {
    if (cfg.k_list.empty()) fail("config: k_list must not be empty");
    for (auto k : cfg.k_list)
      if (k < 1) fail("disorder: truncation k must be >= 1");
  }
  if (e == "concentration" || e == "renewal-asymptotics") {
    if (!(cfg.c > 0)) fail("renewal: c must be > 0");
    if (cfg.n_max < 10) fail("renewal: n_max must be >= 10");
  }
  if (e == "concentration") {
    if (!(cfg.h >= 0)) fail("renewal: tilt h must be >= 0 for a proper law");
    if (!(cfg.delta >= 0)) fail("gibbs: delta must be >= 0");
    if (cfg.n_samples < 1) fail("gibbs: n_samples must be >= 1");
    if (*std::max_element(cfg.N_list.begin(), cfg.N_list.end()) > cfg.n_max)
      fail("gibbs: N exceeds the renewal law support n_max");
  }
  if (e == "renewal-asymptotics") {
    if (!(cfg.K_inf >= 0 && cfg.K_inf < 1)) fail("renewal: K_inf must lie in [0,1)");
    if (cfg.N_list.empty()) fail("config: N_list (renewal horizons) must not be empty");
    for (auto n : cfg.N_list) {
      if (n < 1) fail("renewal: horizon n must be >= 1");
      if (n + cfg.k_shift > cfg.n_max) fail("renewal: n + k_shift must not exceed n_max");
    }
  }
  if (e == "subordinator-growth") {
    if (!(cfg.q > 1)) fail("subordinator: q must be > 1");
    if (cfg.grid_points < 2) fail("subordinator: grid_points must be >= 2");
    if (cfg.grid_refine < 1) fail("subordinator: grid_refine must be >= 1");
  }
}

}  // namespace pinlab::harness

#endif  // PINLAB_HARNESS_CONFIG_HPP
