// Monte Carlo point estimates with order-fixed, numerically stable merging.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "entgeo/rng.hpp"

namespace entgeo {

/// Streaming mean / second moment (Welford update, Chan merge).  Merging in
/// a fixed block order keeps estimates independent of the worker count.
struct MomentAccumulator {
  std::uint64_t count = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const MomentAccumulator& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double delta = o.mean - mean;
    const std::uint64_t n = count + o.count;
    mean += delta * (static_cast<double>(o.count) / static_cast<double>(n));
    m2 += o.m2 + delta * delta *
                     (static_cast<double>(count) * static_cast<double>(o.count) /
                      static_cast<double>(n));
    count = n;
  }

  double sample_variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
};

/// Point estimate with standard error, sample count, seed and parameter echo.
struct MonteCarloEstimate {
  double value = 0;
  double std_error = 0;  // sample standard deviation / sqrt(n)
  std::uint64_t n = 0;
  SeedSpec seed;
  std::map<std::string, std::string> params;
};

inline MonteCarloEstimate make_estimate(const MomentAccumulator& acc, SeedSpec seed,
                                        std::map<std::string, std::string> params,
                                        double scale = 1.0) {
  if (acc.count < 2) throw std::invalid_argument("MonteCarloEstimate: need n >= 2");
  MonteCarloEstimate e;
  e.value = scale * acc.mean;
  e.std_error = std::abs(scale) * std::sqrt(acc.sample_variance() / static_cast<double>(acc.count));
  e.n = acc.count;
  e.seed = seed;
  e.params = std::move(params);
  return e;
}

/// Bernoulli estimate from an integer hit count (counts make the estimate
/// exactly order-invariant).
inline MonteCarloEstimate make_proportion_estimate(std::uint64_t hits, std::uint64_t n,
                                                   SeedSpec seed,
                                                   std::map<std::string, std::string> params) {
  if (n < 2) throw std::invalid_argument("MonteCarloEstimate: need n >= 2");
  MonteCarloEstimate e;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  e.value = p;
  const double sample_var = p * (1.0 - p) * static_cast<double>(n) / static_cast<double>(n - 1);
  e.std_error = std::sqrt(sample_var / static_cast<double>(n));
  e.n = n;
  e.seed = seed;
  e.params = std::move(params);
  return e;
}

}  // namespace entgeo
