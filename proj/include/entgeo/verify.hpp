// Verification suites over seeded grids.  Each suite walks a (d, k) grid,
// runs the module-level identities and inequalities, and reports one check
// record per grid cell, so a failing run names the exact (d, k, seed) cell.
//
// Substream layout inside the suites: instance i owns the 64-bit substream
// block [i * 2^32, (i+1) * 2^32); see-saw calls inside the instance offset
// into that block.

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entgeo/cone.hpp"
#include "entgeo/parallel.hpp"
#include "entgeo/random.hpp"
#include "entgeo/report.hpp"
#include "entgeo/seesaw.hpp"
#include "entgeo/tensor.hpp"
#include "entgeo/volumetry.hpp"

namespace entgeo {

namespace verify_detail {

inline std::string cell_detail(const std::string& text) { return text; }

template <typename T>
std::string num(T x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline std::string numf(double x) { return format_g17(x); }

/// Haar unitary via the polar factor of a Ginibre draw.
inline CMatrix<double> haar_unitary(Index d, PhiloxRng& rng) {
  CMatrix<double> g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = rng.next_complex_gaussian();
  Eigen::JacobiSVD<CMatrix<double>> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Unit vector with a flat Schmidt spectrum in Haar-random local frames.
inline BipartiteVector<double> flat_spectrum_vector(Index d, PhiloxRng& rng) {
  const CMatrix<double> u = haar_unitary(d, rng);
  const CMatrix<double> v = haar_unitary(d, rng);
  return BipartiteVector<double>::from_matrix(
      (u * v.transpose() / std::sqrt(static_cast<double>(d))).eval());
}

inline std::vector<std::vector<Index>> subsets_of_size(Index d, Index k) {
  std::vector<std::vector<Index>> out;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(idx);
    Index pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == d - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (Index j = pos + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// norms suite: k-norm inequality, flat-spectrum equality, monotonicity,
// subset-averaging identities, Schmidt reconstruction invariants.
// ---------------------------------------------------------------------------

struct NormsSuiteParams {
  int d_min = 2;
  int d_max = 8;
  std::uint64_t vectors_per_cell = 10000;
  std::uint64_t subset_vectors = 100;
  SeedSpec seed;
  int workers = 1;
};

inline SuiteReport verify_norms(const NormsSuiteParams& p) {
  SuiteReport rep;
  rep.suite = "norms";
  for (int d = p.d_min; d <= std::min(p.d_max, 8); ++d) {
    // One pass per d covers every k: the Schmidt coefficients are shared.
    struct Cell {
      std::uint64_t floor_violations = 0;
      double worst_margin = 1e300;  // min of k_norm - sqrt(k/d)
    };
    struct Partial {
      std::vector<Cell> cells;
      std::uint64_t monotone_violations = 0;
      std::uint64_t full_norm_violations = 0;
      std::uint64_t reconstruction_violations = 0;
    };
    auto partials = run_blocks<Partial>(
        p.vectors_per_cell, p.workers,
        [&](std::uint64_t first, std::uint64_t last, Partial& part) {
          part.cells.assign(static_cast<std::size_t>(d), Cell{});
          for (std::uint64_t i = first; i < last; ++i) {
            PhiloxRng rng(p.seed, i * (std::uint64_t{1} << 32) + static_cast<std::uint64_t>(d));
            const BipartiteVector<double> xi(
                d, random_haar_vector(static_cast<Index>(d) * d, rng));
            const SchmidtDecomposition<double> sd = schmidt_decompose(xi);
            double prev = 0;
            for (Index k = 1; k <= d; ++k) {
              const double nk = k_norm(sd, k);
              const double bound = std::sqrt(static_cast<double>(k) / d);
              Cell& cell = part.cells[static_cast<std::size_t>(k - 1)];
              cell.worst_margin = std::min(cell.worst_margin, nk - bound);
              if (nk < bound - 1e-12) ++cell.floor_violations;
              if (nk < prev - 1e-12) ++part.monotone_violations;
              prev = nk;
            }
            if (std::abs(prev - xi.norm()) > 1e-12) ++part.full_norm_violations;
            const BipartiteVector<double> rec = sd.reconstruct();
            if ((rec - xi).norm() > tolerance::reconstruction ||
                (sd.left.adjoint() * sd.left - CMatrix<double>::Identity(d, d)).norm() > 1e-10 ||
                (sd.right.adjoint() * sd.right - CMatrix<double>::Identity(d, d)).norm() > 1e-10)
              ++part.reconstruction_violations;
          }
        },
        /*block_size=*/256);
    Partial total;
    total.cells.assign(static_cast<std::size_t>(d), Cell{});
    for (const auto& part : partials) {
      if (part.cells.empty()) continue;
      for (int k = 0; k < d; ++k) {
        total.cells[k].floor_violations += part.cells[k].floor_violations;
        total.cells[k].worst_margin = std::min(total.cells[k].worst_margin, part.cells[k].worst_margin);
      }
      total.monotone_violations += part.monotone_violations;
      total.full_norm_violations += part.full_norm_violations;
      total.reconstruction_violations += part.reconstruction_violations;
    }
    for (int k = 1; k <= d; ++k) {
      const Cell& cell = total.cells[static_cast<std::size_t>(k - 1)];
      rep.checks.push_back({"knorm-floor", d, k, p.seed.seed, cell.floor_violations == 0,
                            "violations=" + verify_detail::num(cell.floor_violations) +
                                " worst_margin=" + verify_detail::numf(cell.worst_margin)});
    }
    rep.checks.push_back({"knorm-monotone", d, 0, p.seed.seed, total.monotone_violations == 0,
                          "violations=" + verify_detail::num(total.monotone_violations)});
    rep.checks.push_back({"knorm-full-equals-norm", d, 0, p.seed.seed,
                          total.full_norm_violations == 0,
                          "violations=" + verify_detail::num(total.full_norm_violations)});
    rep.checks.push_back({"schmidt-reconstruction", d, 0, p.seed.seed,
                          total.reconstruction_violations == 0,
                          "violations=" + verify_detail::num(total.reconstruction_violations)});

    // Flat spectra attain the bound exactly.
    for (int k = 1; k <= d; ++k) {
      double worst = 0;
      const std::uint64_t n_flat = std::max<std::uint64_t>(p.subset_vectors, 10);
      for (std::uint64_t i = 0; i < n_flat; ++i) {
        PhiloxRng rng(p.seed, (std::uint64_t{7} << 56) + i * 64 + static_cast<std::uint64_t>(d));
        const BipartiteVector<double> xi = verify_detail::flat_spectrum_vector(d, rng);
        worst = std::max(worst,
                         std::abs(k_norm(xi, k) - std::sqrt(static_cast<double>(k) / d)));
      }
      rep.checks.push_back({"knorm-floor-equality", d, k, p.seed.seed, worst <= 1e-10,
                            "worst=" + verify_detail::numf(worst)});
    }

    // Exact subset-averaging identities by full enumeration over Lambda.
    for (int k = 1; k <= d; ++k) {
      const auto subsets = verify_detail::subsets_of_size(d, k);
      double worst_inner = 0, worst_norm = 0;
      for (std::uint64_t i = 0; i < p.subset_vectors; ++i) {
        PhiloxRng rng(p.seed, (std::uint64_t{9} << 56) + i * 64 + static_cast<std::uint64_t>(d));
        const BipartiteVector<double> xi(d, random_haar_vector(static_cast<Index>(d) * d, rng));
        double mean_inner = 0, mean_norm2 = 0;
        for (const auto& lambda : subsets) {
          const BipartiteVector<double> part = subset_truncate(xi, std::span<const Index>(lambda));
          mean_inner += inner(xi, part).real();
          mean_norm2 += part.squared_norm();
        }
        mean_inner /= static_cast<double>(subsets.size());
        mean_norm2 /= static_cast<double>(subsets.size());
        const double expect = static_cast<double>(k) / d * xi.squared_norm();
        worst_inner = std::max(worst_inner, std::abs(mean_inner - expect));
        worst_norm = std::max(worst_norm, std::abs(mean_norm2 - expect));
      }
      rep.checks.push_back({"subset-averaging", d, k, p.seed.seed,
                            worst_inner <= 1e-10 && worst_norm <= 1e-10,
                            "worst_inner=" + verify_detail::numf(worst_inner) +
                                " worst_norm=" + verify_detail::numf(worst_norm)});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// chain suite: witness-level chain inequality, the S(k) floor rate, and the
// product-state average identity.
// ---------------------------------------------------------------------------

struct ChainSuiteParams {
  int d_min = 2;
  int d_max = 5;
  std::uint64_t instances_per_cell = 1000;
  int sk_restarts = 50;
  int quad_restarts = 8;
  std::uint64_t product_directions = 20;
  std::uint64_t product_samples = 100000;
  double rate_threshold = 0.99;
  SeedSpec seed;
  int workers = 1;
};

inline SuiteReport verify_chain(const ChainSuiteParams& p) {
  SuiteReport rep;
  rep.suite = "chain";
  constexpr double kWitnessSlack = 1e-11;
  for (int d = std::max(2, p.d_min); d <= std::min(p.d_max, 5); ++d) {
    for (int k = 1; 2 * k <= d; ++k) {
      struct Partial {
        std::uint64_t chain_violations = 0;
        std::uint64_t rate_hits = 0;
        std::string first_failure;
      };
      auto partials = run_blocks<Partial>(
          p.instances_per_cell, p.workers,
          [&](std::uint64_t first, std::uint64_t last, Partial& part) {
            for (std::uint64_t i = first; i < last; ++i) {
              const std::uint64_t base = i * (std::uint64_t{1} << 32);
              PhiloxRng rng(p.seed, base);
              const HermitianOperator<double> a =
                  random_hermitian_direction(static_cast<Index>(d) * d, false, rng);

              // The chain comparisons are witness-constructive, so capped
              // iteration budgets stay valid one-sided bounds.
              SeeSawConfig<double> cfg_sk;
              cfg_sk.restarts = p.sk_restarts;
              cfg_sk.max_iters = 150;
              cfg_sk.tol = 1e-9;
              cfg_sk.rng = p.seed;
              cfg_sk.substream_base = base + (std::uint64_t{1} << 28);
              const ExtremalResult<double> r1 = sk_norm(a, k, cfg_sk);

              const ExtremalResult<double> r2 =
                  polarized_2k_witness(a, r1.witnesses[0], r1.witnesses[1], k);

              SeeSawConfig<double> cfg_quad;
              cfg_quad.restarts = p.quad_restarts;
              cfg_quad.max_iters = 150;
              cfg_quad.tol = 1e-9;
              cfg_quad.rng = p.seed;
              cfg_quad.substream_base = base + (std::uint64_t{2} << 28);
              cfg_quad.initial_guesses.push_back(r2.witnesses[0]);
              const ExtremalResult<double> r3 =
                  quadratic_extremum_k(a, 2 * k, ExtremumSense::max_abs, cfg_quad);

              const bool ok = r2.value >= r1.value - kWitnessSlack &&
                              r3.value >= r2.value - kWitnessSlack;
              if (!ok) {
                ++part.chain_violations;
                if (part.first_failure.empty())
                  part.first_failure = "i=" + verify_detail::num(i) +
                                       " sk=" + verify_detail::numf(r1.value) +
                                       " pol=" + verify_detail::numf(r2.value) +
                                       " quad=" + verify_detail::numf(r3.value);
              }
              const double floor =
                  std::sqrt(static_cast<double>(k)) / std::pow(static_cast<double>(d), 1.5);
              if (r1.value >= floor - 1e-6) ++part.rate_hits;
            }
          },
          /*block_size=*/8);
      Partial total;
      for (const auto& part : partials) {
        total.chain_violations += part.chain_violations;
        total.rate_hits += part.rate_hits;
        if (total.first_failure.empty()) total.first_failure = part.first_failure;
      }
      rep.checks.push_back({"chain-witness", d, k, p.seed.seed, total.chain_violations == 0,
                            "violations=" + verify_detail::num(total.chain_violations) +
                                (total.first_failure.empty() ? "" : " " + total.first_failure)});
      const double rate =
          static_cast<double>(total.rate_hits) / static_cast<double>(p.instances_per_cell);
      rep.checks.push_back({"sk-floor-rate", d, k, p.seed.seed, rate >= p.rate_threshold,
                            "rate=" + verify_detail::numf(rate)});
    }

    // Product-state average: mean |A (u (x) v)|^2 = |A|_HS^2 / d^2 within
    // three standard errors for most unit-HS directions.
    std::uint64_t within = 0;
    for (std::uint64_t j = 0; j < p.product_directions; ++j) {
      PhiloxRng rng(p.seed, (std::uint64_t{11} << 56) + j);
      const HermitianOperator<double> a =
          random_hermitian_direction(static_cast<Index>(d) * d, false, rng);
      SeedSpec mc_seed{p.seed.seed, p.seed.stream + 101 + static_cast<std::uint32_t>(j)};
      const MonteCarloEstimate est =
          product_average_check(a, p.product_samples, mc_seed, p.workers);
      const double expect = 1.0 / (static_cast<double>(d) * d);
      if (std::abs(est.value - expect) <= 3.0 * est.std_error) ++within;
    }
    const double frac = static_cast<double>(within) / static_cast<double>(p.product_directions);
    rep.checks.push_back({"product-average", d, 0, p.seed.seed, frac >= 0.95,
                          "within_3se=" + verify_detail::num(within) + "/" +
                              verify_detail::num(p.product_directions)});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// duality suite: base-duality route agreement, SWAP block-positivity
// certificates, PSD bipolarity, the cone sandwich, and k = d exactness.
// ---------------------------------------------------------------------------

struct DualitySuiteParams {
  int d_min = 2;
  int d_max = 4;
  std::uint64_t instances_per_cell = 1000;
  int restarts = 12;
  SeedSpec seed;
  int workers = 1;
};

inline SuiteReport verify_duality(const DualitySuiteParams& p) {
  SuiteReport rep;
  rep.suite = "duality";
  for (int d = std::max(2, p.d_min); d <= std::min(p.d_max, 4); ++d) {
    const Index n = static_cast<Index>(d) * d;

    for (int k = 1; k <= d; ++k) {
      struct Partial {
        std::uint64_t disagreements = 0;
        std::uint64_t identity_violations = 0;
        std::uint64_t psd_mismatches = 0;
        std::string first_failure;
      };
      auto partials = run_blocks<Partial>(
          p.instances_per_cell, p.workers,
          [&](std::uint64_t first, std::uint64_t last, Partial& part) {
            for (std::uint64_t i = first; i < last; ++i) {
              const std::uint64_t base = i * (std::uint64_t{1} << 32);
              PhiloxRng rng(p.seed, base);
              // y = e + s * (traceless direction), log-uniform scale so the
              // grid mixes members and non-members.
              const HermitianOperator<double> t = random_hermitian_direction(n, true, rng);
              const double s = std::exp(std::log(0.05) +
                                        rng.next_double() * (std::log(20.0) - std::log(0.05)));
              HermitianOperator<double> y{
                  (CMatrix<double>::Identity(n, n) / static_cast<double>(d) + s * t.mat).eval()};

              SeeSawConfig<double> cfg;
              cfg.restarts = p.restarts;
              cfg.max_iters = 200;
              cfg.rng = p.seed;
              cfg.substream_base = base + (std::uint64_t{1} << 28);
              const DualityCertificate<double> cert = base_dual_test(y, k, cfg);

              if (!cert.routes_agree) {
                ++part.disagreements;
                if (part.first_failure.empty())
                  part.first_failure = "i=" + verify_detail::num(i);
              }
              if (std::abs(cert.slack_bases - (1.0 - d * cert.direct_min)) > 1e-8)
                ++part.identity_violations;
              // PSD y must be a member at every k; at k = d membership is the
              // exact eigenvalue test.
              Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(y.mat, Eigen::EigenvaluesOnly);
              const double lmin = es.eigenvalues()(0);
              if (lmin >= 0 && !cert.member) ++part.psd_mismatches;
              if (k == d && (lmin >= -1e-9) != cert.member) ++part.psd_mismatches;
            }
          },
          /*block_size=*/8);
      Partial total;
      for (const auto& part : partials) {
        total.disagreements += part.disagreements;
        total.identity_violations += part.identity_violations;
        total.psd_mismatches += part.psd_mismatches;
        if (total.first_failure.empty()) total.first_failure = part.first_failure;
      }
      rep.checks.push_back(
          {"route-agreement", d, k, p.seed.seed,
           total.disagreements == 0 && total.identity_violations == 0,
           "disagreements=" + verify_detail::num(total.disagreements) +
               " identity_violations=" + verify_detail::num(total.identity_violations) +
               (total.first_failure.empty() ? "" : " " + total.first_failure)});
      rep.checks.push_back({"bipolarity-psd", d, k, p.seed.seed, total.psd_mismatches == 0,
                            "mismatches=" + verify_detail::num(total.psd_mismatches)});
    }

    // Flip-operator certificates: min 0 at k = 1, min -1 at k = 2.
    {
      const QuantumMap<double> transpose_map = map_of_choi(flip_operator<double>(d));
      SeeSawConfig<double> cfg;
      cfg.restarts = 24;
      cfg.rng = p.seed;
      cfg.substream_base = std::uint64_t{13} << 40;
      const auto c1 = k_block_positivity(transpose_map, 1, cfg);
      const bool ok1 =
          c1.verdict != BlockPositivityCertificate<double>::Verdict::refuted &&
          std::abs(c1.min_estimate) <= 1e-8;
      rep.checks.push_back({"swap-blockpos", d, 1, p.seed.seed, ok1,
                            "min=" + verify_detail::numf(c1.min_estimate)});
      if (d >= 2) {
        const auto c2 = k_block_positivity(transpose_map, 2, cfg);
        const bool ok2 =
            c2.verdict == BlockPositivityCertificate<double>::Verdict::refuted &&
            std::abs(c2.min_estimate + 1.0) <= 1e-8;
        rep.checks.push_back({"swap-blockpos", d, 2, p.seed.seed, ok2,
                              "min=" + verify_detail::numf(c2.min_estimate)});
        // A refutation witness stays violated at every larger k.
        bool sandwich_ok = true;
        if (c2.witness) {
          for (int kk = 2; kk <= d; ++kk) {
            SeeSawConfig<double> cfg_kk = cfg;
            cfg_kk.initial_guesses.push_back(*c2.witness);
            const auto ckk = k_block_positivity(transpose_map, kk, cfg_kk);
            if (ckk.verdict != BlockPositivityCertificate<double>::Verdict::refuted)
              sandwich_ok = false;
          }
        }
        rep.checks.push_back({"refutation-monotone", d, 2, p.seed.seed, sandwich_ok, ""});
      }
    }

    // PSD Choi matrices pass at every k (cone sandwich, lower inclusion).
    {
      bool ok = true;
      PhiloxRng rng(p.seed, std::uint64_t{17} << 40);
      const DensityMatrix<double> rho = random_hs_state(n, rng);
      const QuantumMap<double> m =
          map_of_choi(HermitianOperator<double>{(rho.matrix() * static_cast<double>(d)).eval()});
      for (int k = 1; k <= d; ++k) {
        const auto cert = k_block_positivity(m, k);
        if (cert.verdict == BlockPositivityCertificate<double>::Verdict::refuted) ok = false;
      }
      rep.checks.push_back({"cp-sandwich", d, 0, p.seed.seed, ok, ""});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// width suite: gamma factors, closed-form widths, Santalo products, and the
// scaled width study on the rank-<= k state bodies.
// ---------------------------------------------------------------------------

struct WidthSuiteParams {
  int d_min = 2;
  int d_max = 6;
  std::uint64_t directions = 1000;
  int restarts = 6;
  std::uint64_t ball_samples = 10000;
  SeedSpec seed;
  int workers = 1;
};

inline SuiteReport verify_width(const WidthSuiteParams& p) {
  SuiteReport rep;
  rep.suite = "width";

  {
    const double g1 = gamma_n(1), g2 = gamma_n(2);
    const bool ok = std::abs(g1 - std::sqrt(std::numbers::pi / 2.0)) <= 1e-12 &&
                    std::abs(g2 - std::sqrt(2.0 / std::numbers::pi)) <= 1e-12;
    rep.checks.push_back({"gamma-closed-forms", 0, 0, p.seed.seed, ok,
                          "g1=" + verify_detail::numf(g1) + " g2=" + verify_detail::numf(g2)});
  }
  {
    bool ok = true;
    double worst_low = 2, worst_high = 0;
    for (std::int64_t n = 10; n <= 1000000; n = n < 1000 ? n + 1 : n + n / 7) {
      const double v = gamma_n(n) * std::sqrt(static_cast<double>(n));
      worst_low = std::min(worst_low, v);
      worst_high = std::max(worst_high, v);
      if (v < 0.9 || v > 1.3) ok = false;
    }
    rep.checks.push_back({"gamma-sqrt-band", 0, 0, p.seed.seed, ok,
                          "range=[" + verify_detail::numf(worst_low) + "," +
                              verify_detail::numf(worst_high) + "]"});
  }

  for (const Index n : {Index{3}, Index{16}}) {
    const MonteCarloEstimate est = mean_width_mc(
        [](const RVector<double>& g) { return g.norm(); }, n, p.ball_samples, p.seed, p.workers);
    const bool ok = std::abs(est.value - 2.0) <= 3.0 * est.std_error;
    rep.checks.push_back({"ball-width", static_cast<int>(n), 0, p.seed.seed, ok,
                          "est=" + verify_detail::numf(est.value) +
                              " se=" + verify_detail::numf(est.std_error)});
  }
  {
    const MonteCarloEstimate est = mean_width_mc(
        [](const RVector<double>& g) { return std::abs(g(0)); }, 2, p.ball_samples, p.seed,
        p.workers);
    const double expect = 4.0 / std::numbers::pi;
    rep.checks.push_back({"segment-width", 2, 0, p.seed.seed,
                          std::abs(est.value - expect) <= 3.0 * est.std_error,
                          "est=" + verify_detail::numf(est.value)});
  }
  {
    const MonteCarloEstimate est =
        mean_width_mc([](const RVector<double>&) { return 0.0; }, 4, 100, p.seed, 1);
    rep.checks.push_back(
        {"zero-body", 4, 0, p.seed.seed, est.value == 0.0 && est.std_error == 0.0, ""});
  }
  {
    // Urysohn consistency on bodies with known volume radii.
    const MonteCarloEstimate cube_w = mean_width_mc(
        [](const RVector<double>& g) { return g.template lpNorm<1>(); }, 4, p.ball_samples,
        p.seed, p.workers);
    const double vrad_cube = santalo_check(SantaloPair::cube_crosspolytope, 4).vrad_primal;
    const bool ok = vrad_cube <= (1.0 + 3.0 * cube_w.std_error / cube_w.value) * 0.5 * cube_w.value;
    rep.checks.push_back({"urysohn-consistency", 4, 0, p.seed.seed, ok,
                          "vrad=" + verify_detail::numf(vrad_cube) +
                              " half_width=" + verify_detail::numf(0.5 * cube_w.value)});
  }

  {
    bool products_ok = true;
    for (int m = 1; m <= 10; ++m) {
      const SantaloReport r = santalo_check(SantaloPair::cube_crosspolytope, m);
      if (!r.satisfies_upper) products_ok = false;
      const SantaloReport b = santalo_check(SantaloPair::ball_ball, m);
      if (std::abs(b.product - 1.0) > 1e-12) products_ok = false;
    }
    const SantaloReport r2 = santalo_check(SantaloPair::cube_crosspolytope, 2);
    const bool m2_ok = std::abs(r2.product - std::sqrt(8.0) / std::numbers::pi) <= 1e-12;
    rep.checks.push_back({"santalo-products", 0, 0, p.seed.seed, products_ok && m2_ok,
                          "m2=" + verify_detail::numf(r2.product)});
  }

  // Scaled width study: collect w_hat/2 / (sqrt(k) d^{-3/2}) over the grid.
  {
    double band_lo = 1e300, band_hi = 0;
    std::string detail;
    for (int d = std::max(2, p.d_min); d <= std::min(p.d_max, 6); ++d) {
      SeeSawConfig<double> cfg;
      cfg.restarts = p.restarts;
      cfg.max_iters = 200;
      cfg.tol = 1e-9;
      const std::vector<MonteCarloEstimate> widths =
          width_entk_profile(d, p.directions, cfg, p.seed, p.workers);
      // The bodies nest in k, so the estimated widths must be nondecreasing;
      // the chained support profile makes this hold per sample, hence exactly.
      bool monotone_ok = true;
      double prev_width = 0;
      for (int k = 1; k <= d; ++k) {
        const MonteCarloEstimate& est = widths[static_cast<std::size_t>(k - 1)];
        const double scale = std::sqrt(static_cast<double>(k)) /
                             std::pow(static_cast<double>(d), 1.5);
        const double ratio = 0.5 * est.value / scale;
        band_lo = std::min(band_lo, ratio);
        band_hi = std::max(band_hi, ratio);
        if (k > 1 && est.value < prev_width - 1e-12) monotone_ok = false;
        prev_width = est.value;
        detail += (detail.empty() ? "" : " ") + verify_detail::num(d) + "," +
                  verify_detail::num(k) + ":" + verify_detail::numf(ratio);
      }
      rep.checks.push_back({"width-scaling-monotone", d, 0, p.seed.seed, monotone_ok, ""});
    }
    const bool band_ok = band_hi <= 10.0 * band_lo;
    rep.checks.push_back({"width-scaling-band", 0, 0, p.seed.seed, band_ok,
                          "band=[" + verify_detail::numf(band_lo) + "," +
                              verify_detail::numf(band_hi) + "] " + detail});
  }
  return rep;
}

// ---------------------------------------------------------------------------
// prob suite: the exact two-qubit bracket, cross-seed stability, and
// monotonicity of the bracket in k on shared samples.
// ---------------------------------------------------------------------------

struct ProbSuiteParams {
  int n_seeds = 3;
  std::uint64_t samples = 100000;
  double stderr_max = 0;  // <= 0: use the worst-case binomial bound for n
  std::uint64_t monotone_samples = 4000;
  int bracket_restarts = 4;
  SeedSpec seed;
  int workers = 1;
};

inline SuiteReport verify_prob(const ProbSuiteParams& p) {
  SuiteReport rep;
  rep.suite = "prob";
  SeeSawConfig<double> bracket_cfg;
  bracket_cfg.restarts = p.bracket_restarts;
  bracket_cfg.max_iters = 200;
  const double stderr_max =
      p.stderr_max > 0 ? p.stderr_max
                       : 1.05 * std::sqrt(0.25 / static_cast<double>(p.samples));

  std::vector<MonteCarloEstimate> runs;
  for (int s = 0; s < p.n_seeds; ++s) {
    const SeedSpec seed{p.seed.seed + static_cast<std::uint64_t>(s), p.seed.stream};
    const ProbBracket bracket = prob_schmidt_k(2, 1, p.samples, bracket_cfg, seed, p.workers);
    const bool exact_ok = bracket.exact && bracket.n_unknown == 0 &&
                          bracket.p_lo.value == bracket.p_hi.value;
    rep.checks.push_back({"two-qubit-exact", 2, 1, seed.seed, exact_ok,
                          "p=" + verify_detail::numf(bracket.p_lo.value) +
                              " se=" + verify_detail::numf(bracket.p_lo.std_error)});
    rep.checks.push_back({"two-qubit-stderr", 2, 1, seed.seed,
                          bracket.p_lo.std_error < stderr_max,
                          "se=" + verify_detail::numf(bracket.p_lo.std_error)});
    runs.push_back(bracket.p_lo);
  }
  bool stable = true;
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t j = i + 1; j < runs.size(); ++j)
      if (std::abs(runs[i].value - runs[j].value) >
          3.0 * std::hypot(runs[i].std_error, runs[j].std_error))
        stable = false;
  rep.checks.push_back({"two-qubit-cross-seed", 2, 1, p.seed.seed, stable,
                        "seeds=" + verify_detail::num(runs.size())});

  // d = 2: the k = 2 bracket covers all states exactly.
  {
    const ProbBracket all = prob_schmidt_k(2, 2, 1000, bracket_cfg, p.seed, p.workers);
    rep.checks.push_back({"all-states", 2, 2, p.seed.seed,
                          all.exact && all.p_lo.value == 1.0 && all.p_hi.value == 1.0, ""});
  }

  // Monotonicity in k on shared samples (same seed => same draws).
  for (const int d : {2, 3}) {
    double prev_lo = -1, prev_hi = -1;
    bool mono = true, valid = true;
    for (int k = 1; k <= d; ++k) {
      const ProbBracket b =
          prob_schmidt_k(d, k, p.monotone_samples, bracket_cfg, p.seed, p.workers);
      if (b.p_lo.value > b.p_hi.value + 1e-15) valid = false;
      if (k > 1 && (b.p_lo.value < prev_lo - 1e-15 || b.p_hi.value < prev_hi - 1e-15))
        mono = false;
      prev_lo = b.p_lo.value;
      prev_hi = b.p_hi.value;
    }
    rep.checks.push_back({"bracket-monotone-k", d, 0, p.seed.seed, mono && valid, ""});
  }
  return rep;
}

/// Dispatch by suite name; throws std::invalid_argument for unknown names.
inline SuiteReport run_suite(const std::string& name, const NormsSuiteParams& norms,
                             const ChainSuiteParams& chain, const DualitySuiteParams& duality,
                             const WidthSuiteParams& width, const ProbSuiteParams& prob) {
  if (name == "norms") return verify_norms(norms);
  if (name == "chain") return verify_chain(chain);
  if (name == "duality") return verify_duality(duality);
  if (name == "width") return verify_width(width);
  if (name == "prob") return verify_prob(prob);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace entgeo
