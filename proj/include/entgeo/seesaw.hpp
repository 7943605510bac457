// See-saw (alternating) optimizers over Schmidt-rank-constrained unit
// vectors.  Each half-step is an exact maximization through the k-norm closed
// form, so the objective sequence is nondecreasing and the returned value is
// attained by the witness: a certified one-sided bound.
//
//   sk_norm              max |<phi|A|psi>| over unit phi, psi of rank <= k
//   quadratic_extremum_k max / min / max-abs of <eta|A|eta> over rank <= k
//   support_entk         support function of the rank-<= k state body
//   polarized_2k_witness rank-2k quadratic witness from a bilinear pair

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "entgeo/estimate.hpp"
#include "entgeo/parallel.hpp"
#include "entgeo/random.hpp"
#include "entgeo/tensor.hpp"
#include "entgeo/types.hpp"

namespace entgeo {

template <typename Scalar = double>
struct SeeSawConfig {
  int restarts = 20;     // total restarts, >= 1
  int max_iters = 500;   // per restart
  Scalar tol = Scalar(1e-10);  // relative improvement stop
  SeedSpec rng{};
  // Offset for restart substreams; lets nested loops hand each see-saw call a
  // disjoint substream block.
  std::uint64_t substream_base = 0;
  int workers = 1;
  // Extra warm starts (truncated to rank k and normalized before use).
  std::vector<BipartiteVector<Scalar>> initial_guesses;
};

template <typename Scalar = double>
struct ExtremalResult {
  Scalar value = 0;  // re-evaluated at the witness
  std::vector<BipartiteVector<Scalar>> witnesses;  // {eta} or {phi, psi}
  int iterations = 0;     // of the winning restart
  int restarts_used = 0;
  bool converged = false;
  std::vector<Scalar> objective_trace;  // winning restart, per half-step
};

enum class ExtremumSense { max, min, max_abs };

namespace detail {

template <typename Scalar>
void validate_config(const SeeSawConfig<Scalar>& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("SeeSawConfig: restarts must be >= 1");
  if (!(cfg.tol > Scalar(0))) throw std::invalid_argument("SeeSawConfig: tol must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("SeeSawConfig: max_iters must be >= 1");
}

inline Index local_dim_of(Index n, const char* who) {
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n)
    throw std::invalid_argument(std::string(who) + ": operator dimension is not a perfect square");
  return d;
}

template <typename Scalar>
void check_monotone(Scalar value, Scalar prev, const char* who) {
  const Scalar slack = Scalar(1e-11) * (Scalar(1) + std::abs(prev));
  if (value < prev - slack)
    throw std::logic_error(std::string(who) + ": objective decreased across a see-saw step");
}

template <typename Scalar>
BipartiteVector<Scalar> feasible_start(const BipartiteVector<Scalar>& guess, Index k) {
  const TruncateResult<Scalar> t = truncate_top_k(guess, k);
  if (t.norm > Scalar(0)) return t.vector / t.norm;
  return guess.normalized();
}

template <typename Scalar>
struct RestartOutcome {
  Scalar value = -std::numeric_limits<Scalar>::infinity();
  std::vector<BipartiteVector<Scalar>> witnesses;
  int iterations = 0;
  bool converged = false;
  std::vector<Scalar> trace;
  bool valid = false;
};

// Fold partials in restart order; ties keep the earliest restart.
template <typename Scalar>
RestartOutcome<Scalar> best_outcome(std::vector<RestartOutcome<Scalar>> outs) {
  RestartOutcome<Scalar> best;
  for (auto& o : outs) {
    if (!o.valid) continue;
    if (!best.valid || o.value > best.value) best = std::move(o);
  }
  if (!best.valid) throw std::logic_error("see-saw: no restart produced a result");
  return best;
}

}  // namespace detail

/// max |<phi|A|psi>| over unit phi, psi of Schmidt rank <= k; A may be any
/// (finite) operator on C^d (x) C^d.  The value is a lower bound on the true
/// norm, attained by the returned pair, with <phi|A|psi> real nonnegative.
template <typename Scalar = double>
ExtremalResult<Scalar> sk_norm(const CMatrix<Scalar>& a, Index k,
                               const SeeSawConfig<Scalar>& cfg = {}) {
  detail::validate_config(cfg);
  if (a.rows() != a.cols()) throw std::invalid_argument("sk_norm: square operator required");
  if (!a.allFinite()) throw std::invalid_argument("sk_norm: non-finite entry");
  const Index d = detail::local_dim_of(a.rows(), "sk_norm");
  detail::check_k(d, k, "sk_norm");

  // Warm start from the top singular pair: exact whenever the unrestricted
  // maximizer already has rank <= k.
  Eigen::JacobiSVD<CMatrix<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const BipartiteVector<Scalar> warm =
      detail::feasible_start(BipartiteVector<Scalar>(d, svd.matrixV().col(0)), k);

  const CMatrix<Scalar> a_adj = a.adjoint();

  auto run_restart = [&](int r) {
    detail::RestartOutcome<Scalar> out;
    BipartiteVector<Scalar> psi;
    if (r == 0) {
      psi = warm;
    } else if (static_cast<std::size_t>(r - 1) < cfg.initial_guesses.size()) {
      psi = detail::feasible_start(cfg.initial_guesses[static_cast<std::size_t>(r - 1)], k);
    } else {
      PhiloxRng rng(cfg.rng, cfg.substream_base + static_cast<std::uint64_t>(r));
      psi = random_k_entangled<Scalar>(d, k, rng);
    }
    BipartiteVector<Scalar> phi = psi;
    Scalar value = 0;
    Scalar prev_iter = -std::numeric_limits<Scalar>::infinity();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
      const BipartiteVector<Scalar> y(d, (a * psi.amps).eval());
      const detail::TruncateResult<Scalar> ty = detail::truncate_top_k(y, k);
      if (ty.norm <= Scalar(0)) break;
      phi = ty.vector / ty.norm;
      detail::check_monotone(ty.norm, value, "sk_norm");
      value = ty.norm;
      out.trace.push_back(value);

      const BipartiteVector<Scalar> z(d, (a_adj * phi.amps).eval());
      const detail::TruncateResult<Scalar> tz = detail::truncate_top_k(z, k);
      if (tz.norm <= Scalar(0)) break;
      psi = tz.vector / tz.norm;
      detail::check_monotone(tz.norm, value, "sk_norm");
      value = tz.norm;
      out.trace.push_back(value);

      if (value - prev_iter <= cfg.tol * std::max(Scalar(1), std::abs(value))) {
        out.converged = true;
        ++it;
        break;
      }
      prev_iter = value;
    }
    out.value = value;
    out.iterations = it;
    out.witnesses = {phi, psi};
    out.valid = true;
    return out;
  };

  auto partials = run_blocks<detail::RestartOutcome<Scalar>>(
      static_cast<std::uint64_t>(cfg.restarts), cfg.workers,
      [&](std::uint64_t first, std::uint64_t last, detail::RestartOutcome<Scalar>& slot) {
        for (std::uint64_t r = first; r < last; ++r) slot = run_restart(static_cast<int>(r));
      },
      /*block_size=*/1);
  detail::RestartOutcome<Scalar> best = detail::best_outcome(std::move(partials));

  ExtremalResult<Scalar> res;
  BipartiteVector<Scalar>& phi = best.witnesses[0];
  BipartiteVector<Scalar>& psi = best.witnesses[1];
  // Rotate psi so the bilinear form at the witness is real nonnegative.
  Complex<Scalar> c = phi.amps.dot(a * psi.amps);
  if (std::abs(c) > Scalar(0)) {
    psi = (std::conj(c) / std::abs(c)) * psi;
    c = phi.amps.dot(a * psi.amps);
  }
  res.value = std::abs(c);
  res.witnesses = {phi, psi};
  res.iterations = best.iterations;
  res.restarts_used = cfg.restarts;
  res.converged = best.converged;
  res.objective_trace = std::move(best.trace);
  return res;
}

template <typename Scalar>
ExtremalResult<Scalar> sk_norm(const HermitianOperator<Scalar>& a, Index k,
                               const SeeSawConfig<Scalar>& cfg = {}) {
  return sk_norm(a.mat, k, cfg);
}

namespace detail {

// max <eta|M|eta> over unit eta of rank <= k via the truncated power
// iteration on B = |M|_HS I + M; the shift makes B PSD, which makes every
// projection step monotone in the Rayleigh quotient.
template <typename Scalar>
RestartOutcome<Scalar> quadratic_max_restart(const CMatrix<Scalar>& m, Index k,
                                             const SeeSawConfig<Scalar>& cfg,
                                             BipartiteVector<Scalar> eta) {
  const Index d = eta.d;
  const Scalar sigma = m.norm();
  RestartOutcome<Scalar> out;
  auto objective = [&](const BipartiteVector<Scalar>& v) {
    return v.amps.dot(m * v.amps).real();
  };
  Scalar value = objective(eta);
  out.trace.push_back(value);
  Scalar prev = -std::numeric_limits<Scalar>::infinity();
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const BipartiteVector<Scalar> y(d, (sigma * eta.amps + m * eta.amps).eval());
    const TruncateResult<Scalar> ty = truncate_top_k(y, k);
    if (ty.norm <= Scalar(0)) break;  // eta spans the kernel of the shifted operator
    eta = ty.vector / ty.norm;
    const Scalar next = objective(eta);
    check_monotone(next, value, "quadratic_extremum_k");
    value = next;
    out.trace.push_back(value);
    if (value - prev <= cfg.tol * std::max(Scalar(1), std::abs(value))) {
      out.converged = true;
      ++it;
      break;
    }
    prev = value;
  }
  out.value = value;
  out.iterations = it;
  out.witnesses = {eta};
  out.valid = true;
  return out;
}

template <typename Scalar>
RestartOutcome<Scalar> quadratic_max(const CMatrix<Scalar>& m, Index k,
                                     const SeeSawConfig<Scalar>& cfg,
                                     std::uint64_t substream_offset) {
  const Index d = local_dim_of(m.rows(), "quadratic_extremum_k");
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(m);
  const BipartiteVector<Scalar> warm =
      feasible_start(BipartiteVector<Scalar>(d, es.eigenvectors().col(m.rows() - 1)), k);

  auto run_restart = [&](int r) {
    BipartiteVector<Scalar> eta;
    if (r == 0) {
      eta = warm;
    } else if (static_cast<std::size_t>(r - 1) < cfg.initial_guesses.size()) {
      eta = feasible_start(cfg.initial_guesses[static_cast<std::size_t>(r - 1)], k);
    } else {
      PhiloxRng rng(cfg.rng, cfg.substream_base + substream_offset + static_cast<std::uint64_t>(r));
      eta = random_k_entangled<Scalar>(d, k, rng);
    }
    return quadratic_max_restart(m, k, cfg, std::move(eta));
  };

  auto partials = run_blocks<RestartOutcome<Scalar>>(
      static_cast<std::uint64_t>(cfg.restarts), cfg.workers,
      [&](std::uint64_t first, std::uint64_t last, RestartOutcome<Scalar>& slot) {
        for (std::uint64_t r = first; r < last; ++r) slot = run_restart(static_cast<int>(r));
      },
      /*block_size=*/1);
  return best_outcome(std::move(partials));
}

}  // namespace detail

/// One-sided extremum of the Hermitian quadratic form over unit vectors of
/// Schmidt rank <= k.  For max (min) the value is attained by the witness and
/// is therefore a valid lower (upper) bound on the true extremum; max_abs
/// certifies a lower bound on max |<eta|A|eta>|.
template <typename Scalar = double>
ExtremalResult<Scalar> quadratic_extremum_k(const HermitianOperator<Scalar>& a, Index k,
                                            ExtremumSense sense,
                                            const SeeSawConfig<Scalar>& cfg = {}) {
  detail::validate_config(cfg);
  const Index d = detail::local_dim_of(a.dim(), "quadratic_extremum_k");
  detail::check_k(d, k, "quadratic_extremum_k");

  auto finish = [&](detail::RestartOutcome<Scalar> out, bool negate) {
    ExtremalResult<Scalar> res;
    res.witnesses = std::move(out.witnesses);
    res.value = res.witnesses[0].amps.dot(a.mat * res.witnesses[0].amps).real();
    res.iterations = out.iterations;
    res.restarts_used = cfg.restarts;
    res.converged = out.converged;
    res.objective_trace = std::move(out.trace);
    if (negate)
      for (auto& t : res.objective_trace) t = -t;
    return res;
  };

  switch (sense) {
    case ExtremumSense::max:
      return finish(detail::quadratic_max(a.mat, k, cfg, 0), false);
    case ExtremumSense::min:
      return finish(detail::quadratic_max(CMatrix<Scalar>(-a.mat), k, cfg, 0), true);
    case ExtremumSense::max_abs: {
      // Separate substream ranges keep the two branches independent.
      auto hi = finish(detail::quadratic_max(a.mat, k, cfg, 0), false);
      auto lo = finish(detail::quadratic_max(CMatrix<Scalar>(-a.mat), k, cfg, 1u << 20), true);
      ExtremalResult<Scalar>& pick = std::abs(hi.value) >= std::abs(lo.value) ? hi : lo;
      pick.value = std::abs(pick.value);
      return pick;
    }
  }
  throw std::logic_error("quadratic_extremum_k: unknown sense");
}

/// Support function of the rank-<= k state body in direction A (extreme
/// points are pure, so this is the quadratic max).  A lower estimate.
template <typename Scalar = double>
ExtremalResult<Scalar> support_entk(const HermitianOperator<Scalar>& a, Index k,
                                    const SeeSawConfig<Scalar>& cfg = {}) {
  return quadratic_extremum_k(a, k, ExtremumSense::max, cfg);
}

/// Support values for every k = 1..d on one direction, sharing work: each
/// level is warm-started from the previous witness, which also makes the
/// value sequence nondecreasing in k.
template <typename Scalar = double>
std::vector<ExtremalResult<Scalar>> support_entk_profile(const HermitianOperator<Scalar>& a,
                                                         const SeeSawConfig<Scalar>& cfg = {}) {
  const Index d = detail::local_dim_of(a.dim(), "support_entk_profile");
  std::vector<ExtremalResult<Scalar>> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Index k = 1; k <= d; ++k) {
    SeeSawConfig<Scalar> level = cfg;
    level.substream_base = cfg.substream_base + static_cast<std::uint64_t>(k - 1) * (1u << 24);
    if (!out.empty()) level.initial_guesses.push_back(out.back().witnesses[0]);
    out.push_back(support_entk(a, k, level));
  }
  return out;
}

/// Builds the two polarization halves of a bilinear witness pair and returns
/// the better normalized one: |<eta|A|eta>| >= Re <phi|A|psi> is guaranteed
/// because the half norms satisfy |eta_1|^2 + |eta_2|^2 = 1.  The witness has
/// Schmidt rank <= 2k.
template <typename Scalar = double>
ExtremalResult<Scalar> polarized_2k_witness(const HermitianOperator<Scalar>& a,
                                            const BipartiteVector<Scalar>& phi,
                                            const BipartiteVector<Scalar>& psi, Index k) {
  const Index d = detail::local_dim_of(a.dim(), "polarized_2k_witness");
  detail::check_k(d, k, "polarized_2k_witness");
  if (phi.d != d || psi.d != d)
    throw std::invalid_argument("polarized_2k_witness: dimension mismatch");
  auto [eta1, eta2] = polarization_split(phi, psi);

  auto value_at = [&](const BipartiteVector<Scalar>& v) {
    return std::abs(v.amps.dot(a.mat * v.amps).real());
  };

  ExtremalResult<Scalar> res;
  res.restarts_used = 0;
  res.converged = true;
  constexpr Scalar degenerate = Scalar(1e-12);
  if (eta1.norm() <= degenerate && eta2.norm() <= degenerate)
    throw std::invalid_argument("polarized_2k_witness: both polarization halves vanish");
  if (eta1.norm() <= degenerate) {
    res.witnesses = {eta2.normalized()};
  } else if (eta2.norm() <= degenerate) {
    res.witnesses = {eta1.normalized()};
  } else {
    BipartiteVector<Scalar> h1 = eta1.normalized();
    BipartiteVector<Scalar> h2 = eta2.normalized();
    res.witnesses = {value_at(h1) >= value_at(h2) ? h1 : h2};  // ties toward eta_1
  }
  res.value = value_at(res.witnesses[0]);
  return res;
}

/// Monte Carlo check of the product-state average: the mean of |A (u (x) v)|^2
/// over independent Haar u, v equals |A|_HS^2 / d^2.
template <typename Scalar = double>
MonteCarloEstimate product_average_check(const CMatrix<Scalar>& a, std::uint64_t n_samples,
                                         SeedSpec seed, int workers = 1) {
  if (a.rows() != a.cols()) throw std::invalid_argument("product_average_check: square operator");
  const Index d = detail::local_dim_of(a.rows(), "product_average_check");
  if (n_samples < 2) throw std::invalid_argument("product_average_check: need n >= 2");

  auto partials = run_blocks<MomentAccumulator>(
      n_samples, workers, [&](std::uint64_t first, std::uint64_t last, MomentAccumulator& acc) {
        for (std::uint64_t i = first; i < last; ++i) {
          PhiloxRng rng(seed, i);
          const CVector<Scalar> u = random_haar_vector<Scalar>(d, rng);
          const CVector<Scalar> v = random_haar_vector<Scalar>(d, rng);
          const BipartiteVector<Scalar> prod =
              BipartiteVector<Scalar>::from_matrix((u * v.transpose()).eval());
          acc.add(static_cast<double>((a * prod.amps).squaredNorm()));
        }
      });
  MomentAccumulator total;
  for (const auto& p : partials) total.merge(p);
  return make_estimate(total, seed,
                       {{"d", std::to_string(d)}, {"kind", "product_average"}});
}

template <typename Scalar>
MonteCarloEstimate product_average_check(const HermitianOperator<Scalar>& a,
                                         std::uint64_t n_samples, SeedSpec seed,
                                         int workers = 1) {
  return product_average_check(a.mat, n_samples, seed, workers);
}

}  // namespace entgeo
