// Schmidt machinery on C^d (x) C^d: decomposition via the matrix view,
// Ky-Fan-type k-norms, rank-k and subset truncations, and the polarization
// identity helpers.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "entgeo/types.hpp"

namespace entgeo {

namespace detail {

inline void check_k(Index d, Index k, const char* who) {
  if (k < 1 || k > d)
    throw std::out_of_range(std::string(who) + ": k must satisfy 1 <= k <= d");
}

// Phase gauge: rotate so the first nonzero entry of u is real positive; the
// opposite rotation on v keeps s * u v^T unchanged.
template <typename Scalar>
void fix_column_phase(CMatrix<Scalar>& u, CMatrix<Scalar>& v, Index j) {
  constexpr Scalar zero_cut = Scalar(1e-12);
  for (Index i = 0; i < u.rows(); ++i) {
    const Complex<Scalar> z = u(i, j);
    if (std::abs(z) > zero_cut) {
      const Complex<Scalar> phase = z / std::abs(z);
      u.col(j) *= std::conj(phase);
      v.col(j) *= phase;
      return;
    }
  }
}

// Lexicographic order on (Re z_0, Im z_0, Re z_1, ...), used only to break
// exact ties between equal Schmidt coefficients.
template <typename Scalar>
bool lex_greater(const CMatrix<Scalar>& m, Index a, Index b) {
  for (Index i = 0; i < m.rows(); ++i) {
    const Complex<Scalar> za = m(i, a), zb = m(i, b);
    if (za.real() != zb.real()) return za.real() > zb.real();
    if (za.imag() != zb.imag()) return za.imag() > zb.imag();
  }
  return false;
}

template <typename Scalar>
struct TruncateResult {
  BipartiteVector<Scalar> vector;
  Scalar norm = 0;  // equals the k-norm of the input
};

// Rank-k truncation by projecting the matrix view onto its top-k right
// singular subspace (eigenvectors of X^dag X).  Cheaper than a full SVD and
// accurate here because the k-norm is bounded below by sqrt(k/d) |y|, so the
// retained eigenvalue mass never sits near the noise floor.  Hot-loop
// counterpart of k_truncate; the result has rank <= k exactly.
template <typename Scalar>
TruncateResult<Scalar> truncate_top_k(const BipartiteVector<Scalar>& y, Index k) {
  if (k == y.d) return {y, y.norm()};
  const CMatrix<Scalar> x = y.matrix_view();
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(CMatrix<Scalar>(x.adjoint() * x));
  const Scalar mass = std::max(Scalar(0), Scalar(es.eigenvalues().tail(k).sum()));
  const CMatrix<Scalar> vk = es.eigenvectors().rightCols(k);
  return {BipartiteVector<Scalar>::from_matrix((x * (vk * vk.adjoint())).eval()),
          std::sqrt(mass)};
}

}  // namespace detail

/// Singular value decomposition of the matrix view, with a deterministic
/// gauge: each left frame vector has its first nonzero entry real positive,
/// and exact coefficient ties are ordered lexicographically.  The zero vector
/// decomposes as all-zero coefficients with identity frames.
template <typename Scalar>
SchmidtDecomposition<Scalar> schmidt_decompose(const BipartiteVector<Scalar>& xi) {
  const Index d = xi.d;
  SchmidtDecomposition<Scalar> out;
  if (xi.norm() == Scalar(0)) {
    out.coefficients = RVector<Scalar>::Zero(d);
    out.left = CMatrix<Scalar>::Identity(d, d);
    out.right = CMatrix<Scalar>::Identity(d, d);
    return out;
  }

  const CMatrix<Scalar> x = xi.matrix_view();
  Eigen::JacobiSVD<CMatrix<Scalar>> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix<Scalar> u = svd.matrixU();
  // X = U S V^dag = sum_j s_j u_j (conj v_j)^T, so the right Schmidt frame is
  // the conjugated V column set.
  CMatrix<Scalar> v = svd.matrixV().conjugate();
  const RVector<Scalar>& s = svd.singularValues();

  for (Index j = 0; j < d; ++j) detail::fix_column_phase(u, v, j);

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (s(a) != s(b)) return s(a) > s(b);
    return detail::lex_greater(u, a, b);
  });

  out.coefficients.resize(d);
  out.left.resize(d, d);
  out.right.resize(d, d);
  for (Index j = 0; j < d; ++j) {
    out.coefficients(j) = s(order[static_cast<std::size_t>(j)]);
    out.left.col(j) = u.col(order[static_cast<std::size_t>(j)]);
    out.right.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

/// Schmidt coefficients only (descending).
template <typename Scalar>
RVector<Scalar> schmidt_coefficients(const BipartiteVector<Scalar>& xi) {
  if (xi.norm() == Scalar(0)) return RVector<Scalar>::Zero(xi.d);
  Eigen::JacobiSVD<CMatrix<Scalar>> svd(CMatrix<Scalar>(xi.matrix_view()));
  return svd.singularValues();
}

template <typename Scalar>
Index schmidt_rank(const BipartiteVector<Scalar>& xi,
                   Scalar rel_cut = Scalar(tolerance::schmidt_rank_cut)) {
  const RVector<Scalar> s = schmidt_coefficients(xi);
  if (s(0) <= Scalar(0)) return 0;
  const Scalar cut = rel_cut * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

/// k-norm from a precomputed decomposition: sqrt(sum of the top-k s_j^2).
template <typename Scalar>
Scalar k_norm(const SchmidtDecomposition<Scalar>& sd, Index k) {
  detail::check_k(sd.coefficients.size(), k, "k_norm");
  return std::sqrt(sd.coefficients.head(k).squaredNorm());
}

/// max |<xi, zeta>| over unit zeta of Schmidt rank <= k.  Monotone
/// nondecreasing in k, and equal to |xi| at k = d.
template <typename Scalar>
Scalar k_norm(const BipartiteVector<Scalar>& xi, Index k) {
  detail::check_k(xi.d, k, "k_norm");
  const RVector<Scalar> s = schmidt_coefficients(xi);
  return std::sqrt(s.head(k).squaredNorm());
}

/// Top-k part of the decomposition; the result has Schmidt rank <= k and norm
/// equal to the k-norm.
template <typename Scalar>
BipartiteVector<Scalar> k_truncate(const SchmidtDecomposition<Scalar>& sd, Index k) {
  detail::check_k(sd.coefficients.size(), k, "k_truncate");
  return BipartiteVector<Scalar>::from_matrix(sd.left.leftCols(k) *
                                              sd.coefficients.head(k).asDiagonal() *
                                              sd.right.leftCols(k).transpose());
}

template <typename Scalar>
BipartiteVector<Scalar> k_truncate(const BipartiteVector<Scalar>& xi, Index k) {
  detail::check_k(xi.d, k, "k_truncate");
  return k_truncate(schmidt_decompose(xi), k);
}

/// xi_Lambda = sum_{j in Lambda} s_j u_j (x) v_j in the Schmidt frame of xi.
/// Indices are 0-based; the empty set yields the zero vector.
template <typename Scalar>
BipartiteVector<Scalar> subset_truncate(const BipartiteVector<Scalar>& xi,
                                        std::span<const Index> lambda) {
  std::vector<Index> sorted(lambda.begin(), lambda.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty()) {
    if (sorted.front() < 0 || sorted.back() >= xi.d)
      throw std::out_of_range("subset_truncate: index outside {0..d-1}");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("subset_truncate: duplicate index");
  }
  const SchmidtDecomposition<Scalar> sd = schmidt_decompose(xi);
  CMatrix<Scalar> x = CMatrix<Scalar>::Zero(xi.d, xi.d);
  for (const Index j : sorted)
    x += sd.coefficients(j) * sd.left.col(j) * sd.right.col(j).transpose();
  return BipartiteVector<Scalar>::from_matrix(x);
}

/// eta_1 = (phi + psi)/2, eta_2 = (phi - psi)/2 for unit phi, psi, so that
/// Re(|psi><phi|) = |eta_1><eta_1| - |eta_2><eta_2| and
/// |eta_1|^2 + |eta_2|^2 = 1 by the parallelogram identity.
template <typename Scalar>
std::pair<BipartiteVector<Scalar>, BipartiteVector<Scalar>> polarization_split(
    const BipartiteVector<Scalar>& phi, const BipartiteVector<Scalar>& psi) {
  if (phi.d != psi.d) throw std::invalid_argument("polarization_split: dimension mismatch");
  if (!phi.is_unit() || !psi.is_unit())
    throw std::invalid_argument("polarization_split: unit vectors required");
  return {(phi + psi) / Scalar(2), (phi - psi) / Scalar(2)};
}

/// sum_i e_i (x) e_i / sqrt(d)
template <typename Scalar = double>
BipartiteVector<Scalar> maximally_entangled(Index d) {
  BipartiteVector<Scalar> out = BipartiteVector<Scalar>::zero(d);
  const Scalar a = Scalar(1) / std::sqrt(Scalar(d));
  for (Index i = 0; i < d; ++i) out.amp(i, i) = Complex<Scalar>(a, 0);
  return out;
}

/// Flip operator: S (u (x) v) = v (x) u.
template <typename Scalar = double>
HermitianOperator<Scalar> flip_operator(Index d) {
  CMatrix<Scalar> s = CMatrix<Scalar>::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = Complex<Scalar>(1, 0);
  return HermitianOperator<Scalar>{std::move(s)};
}

/// || |xi><xi| - |eta><eta| ||_HS = sqrt(2) (1 - |<xi|eta>|^2)^{1/2} (unit inputs).
template <typename Scalar>
Scalar hs_projector_distance(const BipartiteVector<Scalar>& xi,
                             const BipartiteVector<Scalar>& eta) {
  const Scalar f = std::abs(inner(xi, eta));
  return std::sqrt(std::max(Scalar(0), Scalar(2) * (Scalar(1) - f * f)));
}

/// min_{|z|=1} |xi - z eta| = sqrt(2) (1 - |<xi|eta>|)^{1/2} (unit inputs).
template <typename Scalar>
Scalar projective_distance(const BipartiteVector<Scalar>& xi,
                           const BipartiteVector<Scalar>& eta) {
  const Scalar f = std::abs(inner(xi, eta));
  return std::sqrt(std::max(Scalar(0), Scalar(2) * (Scalar(1) - f)));
}

}  // namespace entgeo
