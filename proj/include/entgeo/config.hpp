// Experiment configuration: a flat key=value file format plus programmatic
// defaults; command-line flags override file values which override defaults.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entgeo/volumetry.hpp"

namespace entgeo {

/// Usage / configuration error; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  int d = 2;
  int k = 1;
  int d_min = 2;
  int d_max = 4;
  int k_min = 1;
  int k_max = 0;  // 0 means "up to d"
  std::uint64_t samples = 10000;
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  int workers = 0;  // 0: ENTGEO_WORKERS, else 1
  std::string out;
  std::string format = "json";  // json | csv
  EnvelopeConstants constants;

  SeedSpec seed_spec() const { return {seed, stream}; }

  SeeSawConfig<double> seesaw() const {
    SeeSawConfig<double> cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.rng = seed_spec();
    return cfg;
  }
};

namespace detail {

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) throw ConfigError(where + ": cannot parse value '" + text + "'");
  return value;
}

}  // namespace detail

/// Applies one key=value setting; `where` prefixes error messages (file:line).
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value, const std::string& where) {
  using detail::parse_number;
  if (key == "d") cfg.d = parse_number<int>(value, where);
  else if (key == "k") cfg.k = parse_number<int>(value, where);
  else if (key == "d_min") cfg.d_min = parse_number<int>(value, where);
  else if (key == "d_max") cfg.d_max = parse_number<int>(value, where);
  else if (key == "k_min") cfg.k_min = parse_number<int>(value, where);
  else if (key == "k_max") cfg.k_max = parse_number<int>(value, where);
  else if (key == "samples") cfg.samples = parse_number<std::uint64_t>(value, where);
  else if (key == "restarts") cfg.restarts = parse_number<int>(value, where);
  else if (key == "max_iters") cfg.max_iters = parse_number<int>(value, where);
  else if (key == "tol") cfg.tol = parse_number<double>(value, where);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, where);
  else if (key == "stream") cfg.stream = parse_number<std::uint32_t>(value, where);
  else if (key == "workers") cfg.workers = parse_number<int>(value, where);
  else if (key == "out") cfg.out = value;
  else if (key == "format") cfg.format = value;
  else if (key == "C0") cfg.constants.C0 = parse_number<double>(value, where);
  else if (key == "c0") cfg.constants.c0 = parse_number<double>(value, where);
  else if (key == "C") cfg.constants.C = parse_number<double>(value, where);
  else if (key == "c") cfg.constants.c = parse_number<double>(value, where);
  else throw ConfigError(where + ": unknown key '" + key + "'");
}

/// Plain key=value file; '#' starts a comment, blank lines are ignored.
/// Returns the set of keys that appeared.
inline std::set<std::string> load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::set<std::string> seen;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    apply_config_entry(cfg, key, value, where);
    seen.insert(key);
  }
  return seen;
}

inline void validate_config(const ExperimentConfig& cfg, bool monte_carlo_command) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1");
  if (cfg.d_min < 1 || cfg.d_max < cfg.d_min) throw ConfigError("empty d range");
  const int k_max = cfg.k_max == 0 ? cfg.d_max : cfg.k_max;
  if (cfg.k_min < 1 || k_max < cfg.k_min) throw ConfigError("empty k range");
  if (monte_carlo_command && cfg.samples < 2) throw ConfigError("samples must be >= 2");
  if (cfg.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cfg.tol > 0)) throw ConfigError("tol must be positive");
  if (cfg.format != "json" && cfg.format != "csv")
    throw ConfigError("format must be json or csv");
}

}  // namespace entgeo
