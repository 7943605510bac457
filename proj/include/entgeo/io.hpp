// Wire schema for vectors and matrices:
//   { "d": <local dimension>, "entries": [[re, im], ...] }
// row-major; vectors carry d^2 entries, operators on C^d (x) C^d carry d^4.
// All file interchange goes through this schema.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "entgeo/types.hpp"

namespace entgeo {

using nlohmann::json;

/// 17 significant digits: enough to round-trip any double bit-exactly.
inline std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_entries_json(const CVector<double>& v) {
  json entries = json::array();
  for (Index i = 0; i < v.size(); ++i) entries.push_back({v(i).real(), v(i).imag()});
  return entries;
}

inline CVector<double> complex_entries_from_json(const json& entries, Index expected,
                                                 const std::string& what) {
  if (!entries.is_array() || static_cast<Index>(entries.size()) != expected)
    throw std::invalid_argument(what + ": expected " + std::to_string(expected) + " entries");
  CVector<double> v(expected);
  for (Index i = 0; i < expected; ++i) {
    const json& e = entries[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw std::invalid_argument(what + ": entries must be [re, im] pairs");
    v(i) = {e[0].get<double>(), e[1].get<double>()};
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag()))
      throw std::invalid_argument(what + ": non-finite entry");
  }
  return v;
}

inline json to_json(const BipartiteVector<double>& xi) {
  return {{"d", xi.d}, {"entries", complex_entries_json(xi.amps)}};
}

inline BipartiteVector<double> vector_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries"))
    throw std::invalid_argument("vector schema: need {\"d\", \"entries\"}");
  const Index d = j["d"].get<Index>();
  if (d < 1) throw std::invalid_argument("vector schema: d must be >= 1");
  return BipartiteVector<double>(d, complex_entries_from_json(j["entries"], d * d, "vector"));
}

/// Serializes an operator on C^d (x) C^d (row-major over (row, col)).
inline json matrix_to_json(Index d, const CMatrix<double>& m) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw std::invalid_argument("matrix schema: expected a d^2 x d^2 matrix");
  json entries = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"d", d}, {"entries", entries}};
}

inline std::pair<Index, CMatrix<double>> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries"))
    throw std::invalid_argument("matrix schema: need {\"d\", \"entries\"}");
  const Index d = j["d"].get<Index>();
  if (d < 1) throw std::invalid_argument("matrix schema: d must be >= 1");
  const Index n = d * d;
  const CVector<double> flat = complex_entries_from_json(j["entries"], n * n, "matrix");
  CMatrix<double> m(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = flat(r * n + c);
  return {d, std::move(m)};
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

inline void save_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace entgeo
