// Dense complex types for bipartite tensors and Hermitian operators.
//
// Conventions used throughout the toolkit:
//   - a bipartite amplitude vector on C^d (x) C^d stores amp(i, j) at flat
//     index i*d + j (row-major), so the d x d matrix view X with
//     X(i, j) = amp(i, j) satisfies ||X||_F = |xi| exactly;
//   - the Hilbert-Schmidt inner product is <A, B> = tr(A^dag B), real on
//     Hermitian pairs.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace entgeo {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CVector = Eigen::Vector<Complex<Scalar>, Eigen::Dynamic>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CMatrixRowMajor =
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using RVector = Eigen::Vector<Scalar, Eigen::Dynamic>;

using Index = Eigen::Index;

// Validation tolerances shared across the toolkit.
namespace tolerance {
inline constexpr double unit_norm = 1e-12;
inline constexpr double hermitian = 1e-12;
inline constexpr double trace_one = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double reconstruction = 1e-10;
// A Schmidt coefficient counts toward the rank iff it exceeds this fraction
// of the largest coefficient.
inline constexpr double schmidt_rank_cut = 1e-9;
}  // namespace tolerance

/// Complex amplitude vector on C^d (x) C^d with a d x d matrix view.
template <typename Scalar = double>
struct BipartiteVector {
  using Cplx = Complex<Scalar>;

  Index d = 0;
  CVector<Scalar> amps;  // size d^2, amp(i, j) at i*d + j

  BipartiteVector() = default;

  BipartiteVector(Index local_dim, CVector<Scalar> amplitudes)
      : d(local_dim), amps(std::move(amplitudes)) {
    if (d < 1) throw std::invalid_argument("BipartiteVector: local dimension must be >= 1");
    if (amps.size() != d * d)
      throw std::invalid_argument("BipartiteVector: expected d^2 amplitudes, got " +
                                  std::to_string(amps.size()));
    if (!amps.allFinite()) throw std::invalid_argument("BipartiteVector: non-finite amplitude");
  }

  static BipartiteVector zero(Index local_dim) {
    return BipartiteVector(local_dim, CVector<Scalar>::Zero(local_dim * local_dim));
  }

  /// e_i (x) e_j
  static BipartiteVector basis(Index local_dim, Index i, Index j) {
    BipartiteVector out = zero(local_dim);
    out.amps(i * local_dim + j) = Cplx(1, 0);
    return out;
  }

  /// Inverse of matrix_view: amp(i, j) = X(i, j).
  static BipartiteVector from_matrix(const CMatrix<Scalar>& x) {
    if (x.rows() != x.cols())
      throw std::invalid_argument("BipartiteVector::from_matrix: square matrix required");
    CMatrixRowMajor<Scalar> row_major = x;
    return BipartiteVector(
        x.rows(), Eigen::Map<const CVector<Scalar>>(row_major.data(), row_major.size()));
  }

  Cplx amp(Index i, Index j) const { return amps(i * d + j); }
  Cplx& amp(Index i, Index j) { return amps(i * d + j); }

  Scalar norm() const { return amps.norm(); }
  Scalar squared_norm() const { return amps.squaredNorm(); }

  bool is_unit(Scalar tol = Scalar(tolerance::unit_norm)) const {
    return std::abs(norm() - Scalar(1)) <= tol;
  }

  BipartiteVector normalized() const {
    const Scalar n = norm();
    if (n <= Scalar(0))
      throw std::domain_error("BipartiteVector: cannot normalize the zero vector");
    BipartiteVector out = *this;
    out.amps /= n;
    return out;
  }

  /// d x d matrix X with X(i, j) = amp(i, j); ||X||_F = |xi| exactly.
  Eigen::Map<const CMatrixRowMajor<Scalar>> matrix_view() const {
    return Eigen::Map<const CMatrixRowMajor<Scalar>>(amps.data(), d, d);
  }
};

template <typename Scalar>
Complex<Scalar> inner(const BipartiteVector<Scalar>& a, const BipartiteVector<Scalar>& b) {
  if (a.d != b.d) throw std::invalid_argument("inner: local dimension mismatch");
  return a.amps.dot(b.amps);  // conjugate-linear in the first argument
}

template <typename Scalar>
BipartiteVector<Scalar> operator+(const BipartiteVector<Scalar>& a,
                                  const BipartiteVector<Scalar>& b) {
  if (a.d != b.d) throw std::invalid_argument("BipartiteVector: dimension mismatch");
  return BipartiteVector<Scalar>(a.d, a.amps + b.amps);
}

template <typename Scalar>
BipartiteVector<Scalar> operator-(const BipartiteVector<Scalar>& a,
                                  const BipartiteVector<Scalar>& b) {
  if (a.d != b.d) throw std::invalid_argument("BipartiteVector: dimension mismatch");
  return BipartiteVector<Scalar>(a.d, a.amps - b.amps);
}

template <typename Scalar>
BipartiteVector<Scalar> operator*(Complex<Scalar> c, const BipartiteVector<Scalar>& v) {
  return BipartiteVector<Scalar>(v.d, (c * v.amps).eval());
}

template <typename Scalar>
BipartiteVector<Scalar> operator*(Scalar c, const BipartiteVector<Scalar>& v) {
  return BipartiteVector<Scalar>(v.d, (c * v.amps).eval());
}

template <typename Scalar>
BipartiteVector<Scalar> operator/(const BipartiteVector<Scalar>& v, Scalar c) {
  return BipartiteVector<Scalar>(v.d, (v.amps / c).eval());
}

/// Coefficients s_j >= 0 in nonincreasing order plus orthonormal frames, so
/// that xi = sum_j s_j u_j (x) v_j with u_j = left.col(j), v_j = right.col(j).
template <typename Scalar = double>
struct SchmidtDecomposition {
  RVector<Scalar> coefficients;
  CMatrix<Scalar> left;
  CMatrix<Scalar> right;

  Index dim() const { return left.rows(); }

  BipartiteVector<Scalar> reconstruct() const {
    // (u (x) v)(i, j) = u_i v_j, hence the plain transpose on the right frame.
    return BipartiteVector<Scalar>::from_matrix(left * coefficients.asDiagonal() *
                                                right.transpose());
  }

  /// Count of coefficients above rel_cut * s_1.
  Index rank(Scalar rel_cut = Scalar(tolerance::schmidt_rank_cut)) const {
    if (coefficients.size() == 0 || coefficients(0) <= Scalar(0)) return 0;
    const Scalar cut = rel_cut * coefficients(0);
    Index r = 0;
    while (r < coefficients.size() && coefficients(r) > cut) ++r;
    return r;
  }
};

/// Hermitian matrix with the Hilbert-Schmidt inner product.
template <typename Scalar = double>
struct HermitianOperator {
  CMatrix<Scalar> mat;

  /// Validating factory for untrusted input; max entrywise deviation from
  /// Hermitian symmetry must stay within tol.
  static HermitianOperator from(CMatrix<Scalar> m, Scalar tol = Scalar(tolerance::hermitian)) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("HermitianOperator: square matrix required");
    if (!m.allFinite()) throw std::invalid_argument("HermitianOperator: non-finite entry");
    const Scalar dev = (m - m.adjoint()).template lpNorm<Eigen::Infinity>();
    if (dev > tol)
      throw std::invalid_argument("HermitianOperator: not Hermitian (max deviation " +
                                  std::to_string(static_cast<double>(dev)) + ")");
    return HermitianOperator{std::move(m)};
  }

  static HermitianOperator identity(Index n) {
    return HermitianOperator{CMatrix<Scalar>::Identity(n, n)};
  }

  static HermitianOperator zero(Index n) {
    return HermitianOperator{CMatrix<Scalar>::Zero(n, n)};
  }

  Index dim() const { return mat.rows(); }
  Scalar hs_norm() const { return mat.norm(); }
  Scalar trace() const { return mat.trace().real(); }
};

/// (M + M^dag)/2
template <typename Scalar>
HermitianOperator<Scalar> hermitian_part(const CMatrix<Scalar>& m) {
  return HermitianOperator<Scalar>{((m + m.adjoint()) / Scalar(2)).eval()};
}

/// tr(A^dag B), real by Hermiticity.
template <typename Scalar>
Scalar hs_inner(const HermitianOperator<Scalar>& a, const HermitianOperator<Scalar>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("hs_inner: dimension mismatch");
  return (a.mat.array().conjugate() * b.mat.array()).sum().real();
}

template <typename Scalar>
HermitianOperator<Scalar> operator+(const HermitianOperator<Scalar>& a,
                                    const HermitianOperator<Scalar>& b) {
  return HermitianOperator<Scalar>{(a.mat + b.mat).eval()};
}

template <typename Scalar>
HermitianOperator<Scalar> operator-(const HermitianOperator<Scalar>& a,
                                    const HermitianOperator<Scalar>& b) {
  return HermitianOperator<Scalar>{(a.mat - b.mat).eval()};
}

template <typename Scalar>
HermitianOperator<Scalar> operator*(Scalar c, const HermitianOperator<Scalar>& a) {
  return HermitianOperator<Scalar>{(c * a.mat).eval()};
}

/// |v><v|
template <typename Scalar>
HermitianOperator<Scalar> projector(const CVector<Scalar>& v) {
  return HermitianOperator<Scalar>{(v * v.adjoint()).eval()};
}

template <typename Scalar>
HermitianOperator<Scalar> projector(const BipartiteVector<Scalar>& xi) {
  return projector<Scalar>(xi.amps);
}

/// PSD, unit-trace refinement of HermitianOperator.
template <typename Scalar = double>
struct DensityMatrix {
  HermitianOperator<Scalar> op;

  static DensityMatrix from(HermitianOperator<Scalar> h,
                            Scalar psd_tol = Scalar(tolerance::psd),
                            Scalar trace_tol = Scalar(tolerance::trace_one)) {
    if (std::abs(h.trace() - Scalar(1)) > trace_tol)
      throw std::invalid_argument("DensityMatrix: trace must equal 1");
    Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(h.mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -psd_tol)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(static_cast<double>(es.eigenvalues().minCoeff())));
    return DensityMatrix{std::move(h)};
  }

  Index dim() const { return op.dim(); }
  const CMatrix<Scalar>& matrix() const { return op.mat; }
};

}  // namespace entgeo
