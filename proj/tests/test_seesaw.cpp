#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "entgeo/random.hpp"
#include "entgeo/seesaw.hpp"
#include "entgeo/tensor.hpp"
#include "oracles.hpp"

using namespace entgeo;

namespace {

SeeSawConfig<double> quick_cfg(int restarts = 12, std::uint64_t seed = 1) {
  SeeSawConfig<double> cfg;
  cfg.restarts = restarts;
  cfg.rng = {seed, 0};
  return cfg;
}

HermitianOperator<double> seeded_direction(Index n, std::uint64_t substream, bool traceless = false) {
  PhiloxRng rng({314, 0}, substream);
  return random_hermitian_direction(n, traceless, rng);
}

}  // namespace

TEST_CASE("sk_norm of the identity is 1 for every k") {
  for (Index d = 2; d <= 3; ++d) {
    const CMatrix<double> eye = CMatrix<double>::Identity(d * d, d * d);
    for (Index k = 1; k <= d; ++k) {
      const auto res = sk_norm(eye, k, quick_cfg());
      CHECK(std::abs(res.value - 1.0) <= 1e-10);
      CHECK(res.witnesses.size() == 2);
      CHECK(schmidt_rank(res.witnesses[0]) <= k);
      CHECK(schmidt_rank(res.witnesses[1]) <= k);
    }
  }
}

TEST_CASE("sk_norm of the maximally entangled projector is k/d") {
  for (Index d = 3; d <= 4; ++d) {
    const auto proj = projector(maximally_entangled<double>(d));
    for (Index k = 1; k <= d; ++k) {
      const auto res = sk_norm(proj, k, quick_cfg());
      CHECK(std::abs(res.value - double(k) / double(d)) <= 1e-8);
    }
  }
}

TEST_CASE("sk_norm of a rank-one operator separates") {
  PhiloxRng rng({271, 0});
  const BipartiteVector<double> xi(4, random_haar_vector(16, rng));
  const BipartiteVector<double> zeta(4, random_haar_vector(16, rng));
  const CMatrix<double> a = xi.amps * zeta.amps.adjoint();
  for (Index k = 1; k <= 4; ++k) {
    const auto res = sk_norm(a, k, quick_cfg());
    CHECK(std::abs(res.value - k_norm(xi, k) * k_norm(zeta, k)) <= 1e-8);
  }
}

TEST_CASE("sk_norm witness reproduces the value and is phase-aligned") {
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = seeded_direction(16, static_cast<std::uint64_t>(rep));
    const auto res = sk_norm(a, 2, quick_cfg());
    const Complex<double> c = res.witnesses[0].amps.dot(a.mat * res.witnesses[1].amps);
    CHECK(std::abs(std::abs(c) - res.value) <= 1e-10);
    CHECK(c.real() >= -1e-12);
    CHECK(std::abs(c.imag()) <= 1e-10);
    // objective trace is nondecreasing
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-10);
  }
}

TEST_CASE("quadratic extremum basics") {
  const Index d = 3;
  const auto eye = HermitianOperator<double>::identity(d * d);
  for (Index k = 1; k <= d; ++k) {
    const auto res = quadratic_extremum_k(eye, k, ExtremumSense::min, quick_cfg());
    CHECK(std::abs(res.value - 1.0) <= 1e-10);
  }
}

TEST_CASE("flip operator extremal values") {
  for (Index d = 2; d <= 4; ++d) {
    const auto swap = flip_operator<double>(d);
    const auto min1 = quadratic_extremum_k(swap, 1, ExtremumSense::min, quick_cfg(24));
    CHECK(std::abs(min1.value) <= 1e-8);
    const auto min2 = quadratic_extremum_k(swap, 2, ExtremumSense::min, quick_cfg(24));
    CHECK(std::abs(min2.value + 1.0) <= 1e-8);
    CHECK(schmidt_rank(min2.witnesses[0]) <= 2);
  }
}

TEST_CASE("unrestricted extremum equals the dense eigensolver") {
  for (Index d = 2; d <= 4; ++d) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto a = seeded_direction(d * d, static_cast<std::uint64_t>(100 + rep));
      Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(a.mat, Eigen::EigenvaluesOnly);
      const auto hi = quadratic_extremum_k(a, d, ExtremumSense::max, quick_cfg(4));
      const auto lo = quadratic_extremum_k(a, d, ExtremumSense::min, quick_cfg(4));
      CHECK(std::abs(hi.value - es.eigenvalues()(d * d - 1)) <= 1e-8);
      CHECK(std::abs(lo.value - es.eigenvalues()(0)) <= 1e-8);
      const auto both = quadratic_extremum_k(a, d, ExtremumSense::max_abs, quick_cfg(4));
      CHECK(std::abs(both.value - std::max(std::abs(hi.value), std::abs(lo.value))) <= 1e-8);
    }
  }
}

TEST_CASE("quadratic traces are monotone in the requested sense") {
  const auto a = seeded_direction(9, 7);
  const auto hi = quadratic_extremum_k(a, 2, ExtremumSense::max, quick_cfg());
  for (std::size_t i = 1; i < hi.objective_trace.size(); ++i)
    CHECK(hi.objective_trace[i] >= hi.objective_trace[i - 1] - 1e-10);
  const auto lo = quadratic_extremum_k(a, 2, ExtremumSense::min, quick_cfg());
  for (std::size_t i = 1; i < lo.objective_trace.size(); ++i)
    CHECK(lo.objective_trace[i] <= lo.objective_trace[i - 1] + 1e-10);
}

TEST_CASE("support function examples") {
  const Index d = 3;
  const auto proj = projector(maximally_entangled<double>(d));
  for (Index k = 1; k <= d; ++k) {
    CHECK(std::abs(support_entk(proj, k, quick_cfg()).value - double(k) / d) <= 1e-8);
    CHECK(std::abs(support_entk(HermitianOperator<double>::identity(d * d), k, quick_cfg()).value -
                   1.0) <= 1e-10);
    const auto point = projector(BipartiteVector<double>::basis(d, 0, 0));
    CHECK(std::abs(support_entk(point, k, quick_cfg()).value - 1.0) <= 1e-8);
  }
}

TEST_CASE("support profile is nondecreasing in k") {
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = seeded_direction(16, static_cast<std::uint64_t>(200 + rep), true);
    const auto profile = support_entk_profile(g, quick_cfg(6));
    for (std::size_t k = 1; k < profile.size(); ++k)
      CHECK(profile[k].value >= profile[k - 1].value - 1e-12);
  }
}

TEST_CASE("polarized witness from an eigenvector pair") {
  const auto a = seeded_direction(9, 5);
  Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(a.mat);
  const BipartiteVector<double> top(3, es.eigenvectors().col(8));
  const auto res = polarized_2k_witness(a, top, top, 3);
  CHECK(std::abs(res.value - std::abs(es.eigenvalues()(8))) <= 1e-12);
  CHECK((res.witnesses[0] - top).norm() <= 1e-12);
}

TEST_CASE("polarized witness beats the bilinear form on the flip operator") {
  const Index d = 3;
  const auto swap = flip_operator<double>(d);
  const BipartiteVector<double> uv = BipartiteVector<double>::basis(d, 0, 1);
  const BipartiteVector<double> vu = BipartiteVector<double>::basis(d, 1, 0);
  const double bilinear = uv.amps.dot(swap.mat * vu.amps).real();
  CHECK(bilinear == doctest::Approx(1.0));
  const auto res = polarized_2k_witness(swap, uv, vu, 1);
  CHECK(res.value >= bilinear - 1e-12);
  CHECK(schmidt_rank(res.witnesses[0]) <= 2);
}

TEST_CASE("polarized witness dominates on random pairs") {
  for (int rep = 0; rep < 500; ++rep) {
    PhiloxRng rng({999, static_cast<std::uint32_t>(rep)});
    const auto a = random_hermitian_direction(9, false, rng);
    const auto phi = random_k_entangled(3, 1, rng);
    const auto psi = random_k_entangled(3, 1, rng);
    const double target = phi.amps.dot(a.mat * psi.amps).real();
    const auto res = polarized_2k_witness(a, phi, psi, 1);
    CHECK(res.value >= target - 1e-11);
  }
}

TEST_CASE("product average identity") {
  const Index d = 3;
  const CMatrix<double> eye = CMatrix<double>::Identity(d * d, d * d);
  const auto trivial = product_average_check(eye, 1000, {3, 0});
  CHECK(trivial.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trivial.std_error <= 1e-12);

  const auto bell_avg =
      product_average_check(projector(maximally_entangled<double>(d)), 20000, {4, 0}, 2);
  CHECK(std::abs(bell_avg.value - 1.0 / (d * d)) <= 3.0 * bell_avg.std_error);

  const auto dir = seeded_direction(d * d, 77);
  const auto rnd_avg = product_average_check(dir, 20000, {5, 0}, 2);
  CHECK(std::abs(rnd_avg.value - 1.0 / (d * d)) <= 3.0 * rnd_avg.std_error);
}

TEST_CASE("see-saw matches brute force at d = 2") {
  int bad_quad_max = 0, bad_quad_min = 0, bad_sk = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = seeded_direction(4, static_cast<std::uint64_t>(1000 + rep));
    const double bf_max = oracles::product_quadratic_extremum(a.mat, true);
    const double bf_min = oracles::product_quadratic_extremum(a.mat, false);
    const double bf_sk = oracles::product_bilinear_max(a.mat);
    const auto cfg = quick_cfg(20, static_cast<std::uint64_t>(rep));
    if (std::abs(quadratic_extremum_k(a, 1, ExtremumSense::max, cfg).value - bf_max) > 1e-4)
      ++bad_quad_max;
    if (std::abs(quadratic_extremum_k(a, 1, ExtremumSense::min, cfg).value - bf_min) > 1e-4)
      ++bad_quad_min;
    if (std::abs(sk_norm(a, 1, cfg).value - bf_sk) > 1e-4) ++bad_sk;
  }
  CHECK(bad_quad_max == 0);
  CHECK(bad_quad_min == 0);
  CHECK(bad_sk == 0);
}

TEST_CASE("configuration validation") {
  const auto a = seeded_direction(4, 1);
  SeeSawConfig<double> cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(sk_norm(a, 1, cfg), std::invalid_argument);
  cfg.restarts = 1;
  cfg.tol = 0;
  CHECK_THROWS_AS(quadratic_extremum_k(a, 1, ExtremumSense::max, cfg), std::invalid_argument);
  CHECK_THROWS_AS(sk_norm(a, 3, quick_cfg()), std::out_of_range);
}
