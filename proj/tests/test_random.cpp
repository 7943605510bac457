#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "entgeo/estimate.hpp"
#include "entgeo/parallel.hpp"
#include "entgeo/random.hpp"
#include "entgeo/tensor.hpp"

using namespace entgeo;

TEST_CASE("philox sequences are keyed by (seed, stream, substream)") {
  PhiloxRng a({123, 4}, 9);
  PhiloxRng b({123, 4}, 9);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u32() == b.next_u32());

  PhiloxRng c({123, 4}, 10);
  PhiloxRng d({123, 5}, 9);
  PhiloxRng e({124, 4}, 9);
  bool c_differs = false, d_differs = false, e_differs = false;
  PhiloxRng ref({123, 4}, 9);
  for (int i = 0; i < 16; ++i) {
    const std::uint32_t r = ref.next_u32();
    if (c.next_u32() != r) c_differs = true;
    if (d.next_u32() != r) d_differs = true;
    if (e.next_u32() != r) e_differs = true;
  }
  CHECK(c_differs);
  CHECK(d_differs);
  CHECK(e_differs);
}

TEST_CASE("uniform and gaussian draws look sane") {
  PhiloxRng rng({9, 0});
  MomentAccumulator uni, gau;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    uni.add(u);
    gau.add(rng.next_gaussian());
  }
  CHECK(std::abs(uni.mean - 0.5) <= 3.0 * std::sqrt(uni.sample_variance() / uni.count));
  CHECK(std::abs(gau.mean) <= 3.0 * std::sqrt(gau.sample_variance() / gau.count));
  CHECK(gau.sample_variance() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("haar vectors") {
  PhiloxRng rng({11, 0});
  const CVector<double> single = random_haar_vector(1, rng);
  CHECK(std::abs(std::abs(single(0)) - 1.0) <= 1e-12);

  // fixed seed reproduces bit-identically
  PhiloxRng r1({77, 1}, 5), r2({77, 1}, 5);
  const CVector<double> v1 = random_haar_vector(6, r1);
  const CVector<double> v2 = random_haar_vector(6, r2);
  CHECK((v1 - v2).norm() == 0.0);

  MomentAccumulator overlap;
  for (int i = 0; i < 100000; ++i) {
    PhiloxRng r({13, 0}, static_cast<std::uint64_t>(i));
    const CVector<double> v = random_haar_vector(4, r);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    overlap.add(std::norm(v(0)));
  }
  const double se = std::sqrt(overlap.sample_variance() / overlap.count);
  CHECK(std::abs(overlap.mean - 0.25) <= 3.0 * se);
}

TEST_CASE("hilbert-schmidt states") {
  PhiloxRng rng({1, 0});
  const DensityMatrix<double> one = random_hs_state(1, rng);
  CHECK(std::abs(one.matrix()(0, 0).real() - 1.0) <= 1e-14);

  // determinism: bit-identical across identically keyed generators
  PhiloxRng r1({5, 2}, 3), r2({5, 2}, 3);
  CHECK((random_hs_state(4, r1).matrix() - random_hs_state(4, r2).matrix()).norm() == 0.0);

  // E[rho] = I/d within Monte Carlo error at 1e5 samples
  const Index dt = 3;
  MomentAccumulator diag, offdiag_re, purity;
  for (int i = 0; i < 100000; ++i) {
    PhiloxRng r({21, 0}, static_cast<std::uint64_t>(i));
    const DensityMatrix<double> rho = random_hs_state(dt, r);
    diag.add(rho.matrix()(1, 1).real());
    offdiag_re.add(rho.matrix()(0, 2).real());
    purity.add((rho.matrix() * rho.matrix()).trace().real());
  }
  CHECK(std::abs(diag.mean - 1.0 / dt) <= 3.0 * std::sqrt(diag.sample_variance() / diag.count));
  CHECK(std::abs(offdiag_re.mean) <=
        3.0 * std::sqrt(offdiag_re.sample_variance() / offdiag_re.count));

  // cross-seed self-consistency of the mean purity
  MomentAccumulator purity2;
  for (int i = 0; i < 100000; ++i) {
    PhiloxRng r({22, 0}, static_cast<std::uint64_t>(i));
    const DensityMatrix<double> rho = random_hs_state(dt, r);
    purity2.add((rho.matrix() * rho.matrix()).trace().real());
  }
  const double se = std::hypot(std::sqrt(purity.sample_variance() / purity.count),
                               std::sqrt(purity2.sample_variance() / purity2.count));
  CHECK(std::abs(purity.mean - purity2.mean) <= 3.0 * se);
}

TEST_CASE("worker partitioning does not change the reduction") {
  auto run = [&](int workers) {
    auto partials = run_blocks<MomentAccumulator>(
        50000, workers, [&](std::uint64_t first, std::uint64_t last, MomentAccumulator& acc) {
          for (std::uint64_t i = first; i < last; ++i) {
            PhiloxRng r({33, 0}, i);
            const DensityMatrix<double> rho = random_hs_state(3, r);
            acc.add((rho.matrix() * rho.matrix()).trace().real());
          }
        });
    MomentAccumulator total;
    for (const auto& p : partials) total.merge(p);
    return total;
  };
  const MomentAccumulator w1 = run(1);
  const MomentAccumulator w3 = run(3);
  const MomentAccumulator w16 = run(16);
  CHECK(w1.mean == w3.mean);
  CHECK(w1.m2 == w3.m2);
  CHECK(w1.mean == w16.mean);
  CHECK(w1.m2 == w16.m2);
}

TEST_CASE("rank-constrained random vectors") {
  for (int i = 0; i < 1000; ++i) {
    PhiloxRng r({44, 0}, static_cast<std::uint64_t>(i));
    const BipartiteVector<double> xi = random_k_entangled(4, 2, r);
    CHECK(xi.is_unit());
    CHECK(schmidt_rank(xi) == 2);
    CHECK(std::abs(k_norm(xi, 2) - 1.0) <= 1e-12);
  }
  PhiloxRng r({44, 1});
  const BipartiteVector<double> prod = random_k_entangled(5, 1, r);
  CHECK(std::abs(k_norm(prod, 1) - 1.0) <= 1e-12);
  const BipartiteVector<double> full = random_k_entangled(4, 4, r);
  CHECK(schmidt_rank(full) == 4);
  CHECK_THROWS_AS(random_k_entangled(3, 4, r), std::out_of_range);
}

TEST_CASE("hermitian directions") {
  PhiloxRng rng({55, 0});
  for (int i = 0; i < 200; ++i) {
    const auto a = random_hermitian_direction(9, false, rng);
    CHECK(std::abs(a.hs_norm() - 1.0) <= 1e-12);
    const auto t = random_hermitian_direction(9, true, rng);
    CHECK(std::abs(t.hs_norm() - 1.0) <= 1e-12);
    CHECK(std::abs(t.trace()) <= 1e-12);
  }
  CHECK_THROWS_AS(random_hermitian_direction(1, true, rng), std::invalid_argument);

  // isotropy: unit variance per Hermitian coordinate
  MomentAccumulator diag, offdiag;
  for (int i = 0; i < 20000; ++i) {
    PhiloxRng r({56, 0}, static_cast<std::uint64_t>(i));
    const auto g = random_hermitian_gaussian(4, false, r);
    diag.add(std::norm(g.mat(2, 2)));
    offdiag.add(std::norm(g.mat(0, 3)));
  }
  CHECK(std::abs(diag.mean - 1.0) <= 3.0 * std::sqrt(diag.sample_variance() / diag.count));
  CHECK(std::abs(offdiag.mean - 1.0) <=
        3.0 * std::sqrt(offdiag.sample_variance() / offdiag.count));
}

TEST_CASE("moment accumulator merge equals streaming") {
  MomentAccumulator whole, left, right;
  PhiloxRng rng({66, 0});
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.next_gaussian() * 3 + 1;
    whole.add(x);
    (i < 400 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.count == whole.count);
  CHECK(left.mean == doctest::Approx(whole.mean).epsilon(1e-13));
  CHECK(left.sample_variance() == doctest::Approx(whole.sample_variance()).epsilon(1e-12));
}
