// Result serialization: fixed-column CSV rows and JSON run manifests.
// CSV bodies contain no timestamps, so identical configurations reproduce
// byte-identical files; wall-clock lives only in manifest metadata.

#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "entgeo/cone.hpp"
#include "entgeo/estimate.hpp"
#include "entgeo/io.hpp"
#include "entgeo/seesaw.hpp"
#include "entgeo/version.hpp"
#include "entgeo/volumetry.hpp"

namespace entgeo {

struct CsvRow {
  std::string command;
  int d = 0;
  int k = 0;
  double value = 0;
  double std_error = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string extra_json;  // compact JSON payload, may be empty
};

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (const char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_csv: empty results");
  os << "command,d,k,value,stderr,n,seed,extra-json\n";
  for (const auto& r : rows) {
    os << csv_quote(r.command) << ',' << r.d << ',' << r.k << ',' << format_g17(r.value) << ','
       << format_g17(r.std_error) << ',' << r.n << ',' << r.seed << ','
       << csv_quote(r.extra_json) << '\n';
  }
}

inline json to_json(const SeedSpec& s) {
  return {{"seed", s.seed}, {"stream", s.stream}};
}

inline json to_json(const MonteCarloEstimate& e) {
  json params = json::object();
  for (const auto& [key, value] : e.params) params[key] = value;
  return {{"value", e.value}, {"stderr", e.std_error}, {"n", e.n},
          {"seed", to_json(e.seed)}, {"params", params}};
}

inline json to_json(const ExtremalResult<double>& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  return {{"value", r.value},        {"witnesses", witnesses},
          {"iterations", r.iterations}, {"restarts_used", r.restarts_used},
          {"converged", r.converged}};
}

inline json to_json(const BlockPositivityCertificate<double>& c) {
  using Cert = BlockPositivityCertificate<double>;
  const char* verdict = c.verdict == Cert::Verdict::refuted      ? "refuted"
                        : c.verdict == Cert::Verdict::positive   ? "positive"
                                                                 : "not_refuted";
  json j{{"verdict", verdict}, {"k", c.k}, {"min_estimate", c.min_estimate}, {"exact", c.exact}};
  if (c.witness) j["witness"] = to_json(*c.witness);
  return j;
}

inline json to_json(const DualityCertificate<double>& c) {
  return {{"member", c.member},           {"exact", c.exact},
          {"slack_bases", c.slack_bases}, {"direct_min", c.direct_min},
          {"routes_agree", c.routes_agree}, {"witness", to_json(c.witness)}};
}

inline json to_json(const BoundEnvelope& e) {
  return {{"d", e.d},         {"k", e.k},         {"kind", envelope_kind_name(e.kind)},
          {"lower", e.lower}, {"upper", e.upper}, {"note", e.note}};
}

inline json to_json(const SantaloReport& r) {
  return {{"m", r.m},
          {"pair", r.pair == SantaloPair::ball_ball ? "ball_ball" : "cube_crosspolytope"},
          {"vrad_primal", r.vrad_primal},
          {"vrad_polar", r.vrad_polar},
          {"product", r.product},
          {"satisfies_upper", r.satisfies_upper},
          {"satisfies_lower_at_c", r.satisfies_lower_at_c},
          {"c", r.c}};
}

/// One verification check: identifies the grid cell and what was measured.
struct CheckRecord {
  std::string name;
  int d = 0;
  int k = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  std::vector<CsvRow> csv_rows() const {
    std::vector<CsvRow> rows;
    rows.reserve(checks.size());
    for (const auto& c : checks)
      rows.push_back({"verify." + suite + "." + c.name, c.d, c.k, c.pass ? 1.0 : 0.0, 0.0, 0,
                      c.seed, c.detail.empty() ? std::string() : json{{"detail", c.detail}}.dump()});
    return rows;
  }
};

inline json to_json(const SuiteReport& s) {
  json checks = json::array();
  int failures = 0;
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name}, {"d", c.d}, {"k", c.k}, {"seed", c.seed},
                      {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass) ++failures;
  }
  return {{"suite", s.suite},
          {"checks", checks},
          {"summary", {{"total", s.checks.size()}, {"fail", failures}, {"pass", s.all_pass()}}}};
}

/// Full run record; wall-clock is metadata and excluded from determinism
/// comparisons.
inline json make_manifest(const std::string& command, const json& config_echo,
                          const json& results, double wall_clock_seconds) {
  return {{"command", command},
          {"toolkit_version", kToolkitVersion},
          {"config", config_echo},
          {"results", results},
          {"wall_clock_seconds", wall_clock_seconds}};
}

}  // namespace entgeo
