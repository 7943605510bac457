// Seeded random ensembles: Hilbert-Schmidt-measure states via square Ginibre
// matrices, Haar unit vectors, Schmidt-rank-k vectors via SVD truncation,
// and GUE-type Hermitian directions.
//
// Draw orders are fixed (vectors componentwise, matrices row-major with the
// diagonal first within each row) so sequences are part of the contract.

#pragma once

#include <stdexcept>

#include "entgeo/rng.hpp"
#include "entgeo/tensor.hpp"
#include "entgeo/types.hpp"

namespace entgeo {

namespace detail {
template <typename Scalar>
Complex<Scalar> complex_gaussian(PhiloxRng& rng) {
  const std::complex<double> z = rng.next_complex_gaussian();
  return Complex<Scalar>(static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag()));
}
}  // namespace detail

/// Normalized vector of n iid standard complex Gaussians.
template <typename Scalar = double>
CVector<Scalar> random_haar_vector(Index n, PhiloxRng& rng) {
  if (n < 1) throw std::invalid_argument("random_haar_vector: n must be >= 1");
  CVector<Scalar> v(n);
  for (;;) {
    for (Index i = 0; i < n; ++i) v(i) = detail::complex_gaussian<Scalar>(rng);
    const Scalar norm = v.norm();
    if (norm > Scalar(0)) return (v / norm).eval();
  }
}

/// rho = G G^dag / tr(G G^dag) with G a square matrix of iid standard complex
/// Gaussians (the Hilbert-Schmidt-measure construction).
template <typename Scalar = double>
DensityMatrix<Scalar> random_hs_state(Index d_total, PhiloxRng& rng) {
  if (d_total < 1) throw std::invalid_argument("random_hs_state: dimension must be >= 1");
  for (;;) {
    CMatrix<Scalar> g(d_total, d_total);
    for (Index i = 0; i < d_total; ++i)
      for (Index j = 0; j < d_total; ++j) g(i, j) = detail::complex_gaussian<Scalar>(rng);
    CMatrix<Scalar> rho = g * g.adjoint();
    const Scalar tr = rho.trace().real();
    if (tr <= Scalar(0)) continue;
    rho /= tr;
    rho = ((rho + rho.adjoint()) / Scalar(2)).eval();
    return DensityMatrix<Scalar>::from(HermitianOperator<Scalar>{std::move(rho)});
  }
}

/// Unit vector of Schmidt rank <= k: Gaussian amplitudes, SVD-truncated to the
/// top k terms and renormalized.  The law is invariant under local unitaries.
template <typename Scalar = double>
BipartiteVector<Scalar> random_k_entangled(Index d, Index k, PhiloxRng& rng) {
  detail::check_k(d, k, "random_k_entangled");
  for (;;) {
    CVector<Scalar> amps(d * d);
    for (Index i = 0; i < d * d; ++i) amps(i) = detail::complex_gaussian<Scalar>(rng);
    BipartiteVector<Scalar> xi(d, std::move(amps));
    if (k == d) {
      if (xi.norm() > Scalar(0)) return xi.normalized();
      continue;
    }
    const detail::TruncateResult<Scalar> t = detail::truncate_top_k(xi, k);
    if (t.norm > Scalar(0)) return t.vector / t.norm;
  }
}

/// Standard Gaussian on the Hermitian matrix space (isotropic for the
/// Hilbert-Schmidt inner product), optionally projected onto trace zero.
template <typename Scalar = double>
HermitianOperator<Scalar> random_hermitian_gaussian(Index n, bool traceless, PhiloxRng& rng) {
  if (n < 1) throw std::invalid_argument("random_hermitian_gaussian: n must be >= 1");
  if (traceless && n == 1)
    throw std::invalid_argument("random_hermitian_gaussian: no nonzero traceless direction for n = 1");
  CMatrix<Scalar> a(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = Complex<Scalar>(static_cast<Scalar>(rng.next_gaussian()), 0);
    for (Index j = i + 1; j < n; ++j) {
      const Complex<Scalar> z = detail::complex_gaussian<Scalar>(rng);
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  if (traceless) a -= (a.trace() / Scalar(n)) * CMatrix<Scalar>::Identity(n, n);
  return HermitianOperator<Scalar>{std::move(a)};
}

/// GUE-type draw normalized to unit Hilbert-Schmidt norm.
template <typename Scalar = double>
HermitianOperator<Scalar> random_hermitian_direction(Index n, bool traceless, PhiloxRng& rng) {
  for (;;) {
    HermitianOperator<Scalar> a = random_hermitian_gaussian<Scalar>(n, traceless, rng);
    const Scalar norm = a.hs_norm();
    if (norm > Scalar(0)) {
      a.mat /= norm;
      return a;
    }
  }
}

}  // namespace entgeo
