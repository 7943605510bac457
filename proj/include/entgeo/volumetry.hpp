// Width and volume-radius estimators: Gaussian mean-width Monte Carlo,
// Urysohn and Santalo checkers, closed-form bound envelopes, hit-or-miss
// probability estimates for Schmidt-number membership.
//
// Widths of the rank-<= k state bodies are computed in the traceless
// hyperplane centered at the maximally mixed state (real dimension d^4 - 1),
// where the support oracle is the rank-constrained quadratic maximum; those
// estimates inherit the see-saw's one-sidedness and are flagged as lower
// estimates.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "entgeo/cone.hpp"
#include "entgeo/estimate.hpp"
#include "entgeo/parallel.hpp"
#include "entgeo/random.hpp"
#include "entgeo/seesaw.hpp"

namespace entgeo {

/// gamma_n = Gamma(n/2) / (sqrt(2) Gamma(n/2 + 1/2)), the factor converting
/// Gaussian averages of support functions into spherical ones; ~ 1/sqrt(n).
inline double gamma_n(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("gamma_n: n must be >= 1");
  const double h = 0.5 * static_cast<double>(n);
  return std::exp(std::lgamma(h) - std::lgamma(h + 0.5)) / std::sqrt(2.0);
}

/// Mean width 2 gamma_n E h_K(g) over standard Gaussian directions g in R^n.
/// The oracle must be positively homogeneous.
template <typename SupportFn>
MonteCarloEstimate mean_width_mc(SupportFn&& h, Index n, std::uint64_t n_samples, SeedSpec seed,
                                 int workers = 1, bool lower_estimate = false) {
  if (n < 1) throw std::invalid_argument("mean_width_mc: ambient dimension must be >= 1");
  if (n_samples < 2) throw std::invalid_argument("mean_width_mc: need n_samples >= 2");
  auto partials = run_blocks<MomentAccumulator>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, MomentAccumulator& acc) {
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          RVector<double> g(n);
          for (Index j = 0; j < n; ++j) g(j) = rng.next_gaussian();
          acc.add(h(g));
        }
      });
  MomentAccumulator total;
  for (const auto& p : partials) total.merge(p);
  return make_estimate(total, seed,
                       {{"n", std::to_string(n)},
                        {"kind", "mean_width"},
                        {"lower_estimate", lower_estimate ? "true" : "false"}},
                       2.0 * gamma_n(n));
}

/// Mean width of the rank-<= k state body: Gaussian directions are traceless
/// Hermitian draws, the support value comes from the rank-constrained
/// see-saw, so the result is a lower estimate of the true width.
inline MonteCarloEstimate width_entk(Index d, Index k, std::uint64_t n_samples,
                                     const SeeSawConfig<double>& cfg, SeedSpec seed,
                                     int workers = 1) {
  detail::check_k(d, k, "width_entk");
  if (n_samples < 2) throw std::invalid_argument("width_entk: need n_samples >= 2");
  const Index ambient = d * d * d * d - 1;
  auto partials = run_blocks<MomentAccumulator>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, MomentAccumulator& acc) {
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          const HermitianOperator<double> g = random_hermitian_gaussian(d * d, true, rng);
          SeeSawConfig<double> inner = cfg;
          inner.rng = seed;
          inner.workers = 1;
          inner.substream_base = (i + 1) << 32;  // disjoint block per sample
          acc.add(support_entk(g, k, inner).value);
        }
      },
      /*block_size=*/8);
  MomentAccumulator total;
  for (const auto& p : partials) total.merge(p);
  return make_estimate(total, seed,
                       {{"d", std::to_string(d)},
                        {"k", std::to_string(k)},
                        {"kind", "width_entk"},
                        {"lower_estimate", "true"}},
                       2.0 * gamma_n(ambient));
}

/// Widths for every k = 1..d on shared directions; within each direction the
/// support profile is chained, so the estimates are nondecreasing in k.
inline std::vector<MonteCarloEstimate> width_entk_profile(Index d, std::uint64_t n_samples,
                                                          const SeeSawConfig<double>& cfg,
                                                          SeedSpec seed, int workers = 1) {
  if (d < 1) throw std::invalid_argument("width_entk_profile: d must be >= 1");
  if (n_samples < 2) throw std::invalid_argument("width_entk_profile: need n_samples >= 2");
  const Index ambient = d * d * d * d - 1;
  using Partial = std::vector<MomentAccumulator>;
  auto partials = run_blocks<Partial>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, Partial& acc) {
        acc.assign(static_cast<std::size_t>(d), MomentAccumulator{});
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          const HermitianOperator<double> g = random_hermitian_gaussian(d * d, true, rng);
          SeeSawConfig<double> inner = cfg;
          inner.rng = seed;
          inner.workers = 1;
          inner.substream_base = (i + 1) << 32;
          const auto profile = support_entk_profile(g, inner);
          for (Index k = 0; k < d; ++k)
            acc[static_cast<std::size_t>(k)].add(profile[static_cast<std::size_t>(k)].value);
        }
      },
      /*block_size=*/8);
  std::vector<MomentAccumulator> totals(static_cast<std::size_t>(d));
  for (const auto& p : partials) {
    if (p.empty()) continue;
    for (Index k = 0; k < d; ++k) totals[static_cast<std::size_t>(k)].merge(p[static_cast<std::size_t>(k)]);
  }
  std::vector<MonteCarloEstimate> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Index k = 1; k <= d; ++k)
    out.push_back(make_estimate(totals[static_cast<std::size_t>(k - 1)], seed,
                                {{"d", std::to_string(d)},
                                 {"k", std::to_string(k)},
                                 {"kind", "width_entk"},
                                 {"lower_estimate", "true"}},
                                2.0 * gamma_n(ambient)));
  return out;
}

/// A bound derived from a width value; `certified` is cleared when the width
/// itself was only a lower estimate.
struct WidthBound {
  double value = 0;
  bool certified = true;
};

/// Urysohn: vrad(K) <= w(K)/2.
inline WidthBound urysohn_upper(double width, bool width_is_lower_estimate = false) {
  if (width < 0) throw std::domain_error("urysohn_upper: negative width");
  return {0.5 * width, !width_is_lower_estimate};
}

/// Dual bound vrad(K°) >= 1/(2 w(K)).
inline WidthBound inv_urysohn_lower(double width, bool width_is_lower_estimate = false) {
  if (width <= 0) throw std::domain_error("inv_urysohn_lower: width must be positive");
  return {0.5 / width, !width_is_lower_estimate};
}

enum class SantaloPair { ball_ball, cube_crosspolytope };

struct SantaloReport {
  int m = 0;
  SantaloPair pair = SantaloPair::ball_ball;
  double vrad_primal = 0;
  double vrad_polar = 0;
  double product = 0;
  bool satisfies_upper = false;    // product <= 1
  bool satisfies_lower_at_c = false;  // product >= c
  double c = 0;
};

namespace detail {
inline double log_vol_ball(int m) {
  return 0.5 * m * std::log(std::numbers::pi) - std::lgamma(0.5 * m + 1.0);
}
}  // namespace detail

/// Exact volume-radius products for polar pairs with closed-form volumes.
inline SantaloReport santalo_check(SantaloPair pair, int m, double c = 0.1) {
  if (m < 1 || m > 10)
    throw std::invalid_argument("santalo_check: supported dimensions are 1 <= m <= 10");
  SantaloReport rep;
  rep.m = m;
  rep.pair = pair;
  rep.c = c;
  switch (pair) {
    case SantaloPair::ball_ball:
      rep.vrad_primal = 1.0;
      rep.vrad_polar = 1.0;
      rep.product = 1.0;
      break;
    case SantaloPair::cube_crosspolytope: {
      const double lvb = detail::log_vol_ball(m);
      rep.vrad_primal = std::exp(std::log(2.0) - lvb / m);                          // [-1,1]^m
      rep.vrad_polar = std::exp(std::log(2.0) - std::lgamma(m + 1.0) / m - lvb / m);  // unit l1 ball
      rep.product = rep.vrad_primal * rep.vrad_polar;
      break;
    }
  }
  rep.satisfies_upper = rep.product <= 1.0 + 1e-12;
  rep.satisfies_lower_at_c = rep.product >= c;
  return rep;
}

/// Hit-or-miss bracket for the probability that a Hilbert-Schmidt random
/// state on C^d (x) C^d has Schmidt number <= k.  Confirmations feed the lower
/// estimate, refutations cap the upper one; `exact` marks the (d, k) regimes
/// where the bracket decides every sample.
struct ProbBracket {
  MonteCarloEstimate p_lo;
  MonteCarloEstimate p_hi;
  bool exact = false;
  std::uint64_t n_yes = 0;
  std::uint64_t n_no = 0;
  std::uint64_t n_unknown = 0;
};

inline ProbBracket prob_schmidt_k(Index d, Index k, std::uint64_t n_samples,
                                  const SeeSawConfig<double>& bracket_cfg, SeedSpec seed,
                                  int workers = 1) {
  detail::check_k(d, k, "prob_schmidt_k");
  if (n_samples < 2) throw std::invalid_argument("prob_schmidt_k: need n_samples >= 2");
  struct Counts {
    std::uint64_t yes = 0, no = 0, unknown = 0;
  };
  auto partials = run_blocks<Counts>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, Counts& c) {
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          const DensityMatrix<double> rho = random_hs_state(d * d, rng);
          SeeSawConfig<double> inner = bracket_cfg;
          inner.rng = seed;
          inner.workers = 1;
          inner.substream_base = (i + 1) << 32;
          const auto bracket = schmidt_number_bracket(rho, k, inner);
          if (bracket.decided == Flag::yes)
            ++c.yes;
          else if (bracket.decided == Flag::no)
            ++c.no;
          else
            ++c.unknown;
        }
      });
  Counts total;
  for (const auto& p : partials) {
    total.yes += p.yes;
    total.no += p.no;
    total.unknown += p.unknown;
  }
  const std::map<std::string, std::string> params = {
      {"d", std::to_string(d)}, {"k", std::to_string(k)}, {"kind", "prob_schmidt_k"}};
  ProbBracket out;
  out.n_yes = total.yes;
  out.n_no = total.no;
  out.n_unknown = total.unknown;
  out.p_lo = make_proportion_estimate(total.yes, n_samples, seed, params);
  out.p_hi = make_proportion_estimate(n_samples - total.no, n_samples, seed, params);
  out.exact = (d == 2 && k == 1) || k == d;
  return out;
}

/// Closed-form bound envelopes; the universal constants are configuration
/// inputs, never asserted values.
struct EnvelopeConstants {
  double C0 = 1.0;
  double c0 = 0.1;
  double C = 1.0;
  double c = 0.1;
};

enum class EnvelopeKind { vrad_entk, width_entk, prob_schmidt_k, ratio_successive };

struct BoundEnvelope {
  int d = 0;
  int k = 0;
  EnvelopeKind kind = EnvelopeKind::vrad_entk;
  double lower = 0;
  double upper = 0;
  std::string note;
};

inline const char* envelope_kind_name(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::vrad_entk: return "vrad_entk";
    case EnvelopeKind::width_entk: return "width_entk";
    case EnvelopeKind::prob_schmidt_k: return "prob_schmidt_k";
    case EnvelopeKind::ratio_successive: return "ratio_successive";
  }
  return "?";
}

inline std::vector<BoundEnvelope> bound_envelopes(int d, int k,
                                                  const EnvelopeConstants& constants = {}) {
  if (d < 1 || k < 1 || k > d) throw std::out_of_range("bound_envelopes: need 1 <= k <= d");
  const double scale = std::pow(static_cast<double>(d), -1.5);
  const double vrad_lower = 0.5 * std::sqrt(std::floor(k / 2.0)) * scale;
  const double vrad_upper = constants.C0 * std::sqrt(static_cast<double>(k)) * scale;

  std::vector<BoundEnvelope> out;
  BoundEnvelope vr{d, k, EnvelopeKind::vrad_entk, vrad_lower, vrad_upper, ""};
  if (k == 1) vr.note = "lower bound vacuous at k = 1";
  out.push_back(vr);
  // The half-width envelope shares both sides: the upper bound comes from the
  // same entropy estimate, the lower from Urysohn applied to the vrad bound.
  out.push_back({d, k, EnvelopeKind::width_entk, vrad_lower, vrad_upper,
                 k == 1 ? "lower bound vacuous at k = 1" : ""});

  const double expo = 0.5 * (static_cast<double>(d) * d - 1.0);
  const double ratio_kd = static_cast<double>(k) / static_cast<double>(d);
  out.push_back({d, k, EnvelopeKind::prob_schmidt_k,
                 std::pow(constants.c * ratio_kd, expo),
                 std::min(1.0, std::pow(constants.C * ratio_kd, expo)),
                 "upper clamped at 1"});

  const double successive = std::pow(1.0 + 1.0 / static_cast<double>(k), expo);
  out.push_back({d, k, EnvelopeKind::ratio_successive, successive, successive,
                 "heuristic successive-volume model"});

  for (const auto& env : out)
    if (std::isfinite(env.lower) && std::isfinite(env.upper) && env.lower > env.upper &&
        constants.c0 <= constants.C0 && k >= 2)
      throw std::invalid_argument("bound_envelopes: inconsistent constants (lower > upper)");
  return out;
}

/// Hit-or-miss volume-radius ratio on the Hilbert-Schmidt ensemble: the hit
/// probability p gives vrad(inner)/vrad(outer) ~ p^{1/m} with
/// m = d_total^2 - 1, delta-method standard error.  The oracle must decide
/// every sample; "unknown" aborts.
struct VradRatioEstimate {
  MonteCarloEstimate hit_probability;
  MonteCarloEstimate vrad_ratio;
  std::uint64_t ambient_dim = 0;
};

inline VradRatioEstimate vrad_ratio_mc(
    const std::function<Flag(const DensityMatrix<double>&)>& oracle, Index d_total,
    std::uint64_t n_samples, SeedSpec seed, int workers = 1) {
  if (d_total < 1) throw std::invalid_argument("vrad_ratio_mc: dimension must be >= 1");
  if (n_samples < 2) throw std::invalid_argument("vrad_ratio_mc: need n_samples >= 2");
  struct Counts {
    std::uint64_t yes = 0, unknown = 0;
  };
  auto partials = run_blocks<Counts>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, Counts& c) {
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          const DensityMatrix<double> rho = random_hs_state(d_total, rng);
          const Flag f = oracle(rho);
          if (f == Flag::yes)
            ++c.yes;
          else if (f == Flag::unknown)
            ++c.unknown;
        }
      });
  Counts total;
  for (const auto& p : partials) {
    total.yes += p.yes;
    total.unknown += p.unknown;
  }
  if (total.unknown > 0)
    throw std::runtime_error("vrad_ratio_mc: oracle returned 'unknown' on " +
                             std::to_string(total.unknown) +
                             " samples; the volume ratio is undefined under a bracket");

  VradRatioEstimate out;
  out.ambient_dim = static_cast<std::uint64_t>(d_total) * d_total - 1;
  const std::map<std::string, std::string> params = {
      {"d_total", std::to_string(d_total)}, {"kind", "vrad_ratio"}};
  out.hit_probability = make_proportion_estimate(total.yes, n_samples, seed, params);

  const double m = static_cast<double>(out.ambient_dim);
  const double p = out.hit_probability.value;
  out.vrad_ratio = out.hit_probability;
  if (p > 0) {
    out.vrad_ratio.value = std::pow(p, 1.0 / m);
    out.vrad_ratio.std_error =
        std::pow(p, 1.0 / m - 1.0) / m * out.hit_probability.std_error;
  } else {
    out.vrad_ratio.value = 0;
    out.vrad_ratio.std_error = 0;  // delta method degenerates at p = 0
  }
  return out;
}

}  // namespace entgeo
