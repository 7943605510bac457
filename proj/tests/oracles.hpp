// Test-only oracles: independent routes to expected values, kept separate
// from the implementations they check.
//
//   - Bloch-sphere brute force for d = 2 rank-1 extremal problems (outer mesh
//     with exact inner 2x2 solves, then local zoom refinement);
//   - Kronecker-product builder for partial trace / transpose identities;
//   - direct projector-distance computation.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "entgeo/types.hpp"

namespace oracles {

using entgeo::BipartiteVector;
using entgeo::CMatrix;
using entgeo::CVector;
using entgeo::Index;
using Cx = std::complex<double>;

inline CVector<double> bloch_vector(double theta, double phi) {
  CVector<double> u(2);
  u(0) = Cx(std::cos(theta / 2), 0);
  u(1) = std::exp(Cx(0, phi)) * std::sin(theta / 2);
  return u;
}

// 2x2 block <u| (x) I  A  |c> (x) I of a 4x4 operator.
inline CMatrix<double> inner_block(const CMatrix<double>& a, const CVector<double>& u,
                                   const CVector<double>& c) {
  CMatrix<double> m = CMatrix<double>::Zero(2, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index b = 0; b < 2; ++b)
        for (Index e = 0; e < 2; ++e)
          m(b, e) += std::conj(u(i)) * a(i * 2 + b, j * 2 + e) * c(j);
  return m;
}

inline double eig2_max(const CMatrix<double>& m) {
  const double t = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, t * t / 4 - det));
  return t / 2 + disc;
}

inline double eig2_min(const CMatrix<double>& m) {
  const double t = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, t * t / 4 - det));
  return t / 2 - disc;
}

inline double sigma2_max(const CMatrix<double>& m) {
  return std::sqrt(std::max(0.0, eig2_max(CMatrix<double>(m.adjoint() * m))));
}

// max or min over product states u (x) v of <uv|A|uv> for a Hermitian 4x4 A:
// mesh over u's Bloch sphere, exact 2x2 eigenvalue over v, local refinement.
inline double product_quadratic_extremum(const CMatrix<double>& a, bool maximize) {
  auto value_at = [&](double theta, double phi) {
    const CVector<double> u = bloch_vector(theta, phi);
    const CMatrix<double> m = inner_block(a, u, u);
    return maximize ? eig2_max(m) : eig2_min(m);
  };

  const int n_theta = 100, n_phi = 100;  // 10^4-point outer mesh
  double best = maximize ? -1e300 : 1e300;
  double best_theta = 0, best_phi = 0;
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const double theta = std::numbers::pi * (i + 0.5) / n_theta;
      const double phi = 2 * std::numbers::pi * j / n_phi;
      const double v = value_at(theta, phi);
      if (maximize ? v > best : v < best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  double span_theta = std::numbers::pi / n_theta, span_phi = 2 * std::numbers::pi / n_phi;
  for (int round = 0; round < 4; ++round) {
    const int refine = 15;
    double rb_theta = best_theta, rb_phi = best_phi;
    for (int i = -refine; i <= refine; ++i)
      for (int j = -refine; j <= refine; ++j) {
        const double theta =
            std::clamp(best_theta + span_theta * i / refine, 0.0, std::numbers::pi);
        const double phi = best_phi + span_phi * j / refine;
        const double v = value_at(theta, phi);
        if (maximize ? v > best : v < best) {
          best = v;
          rb_theta = theta;
          rb_phi = phi;
        }
      }
    best_theta = rb_theta;
    best_phi = rb_phi;
    span_theta /= refine * 0.5;
    span_phi /= refine * 0.5;
  }
  return best;
}

// max over product states a (x) b, c (x) e of |<ab|A|ce>|: mesh over the two
// outer Bloch spheres, exact singular value over the two inner qubits.
inline double product_bilinear_max(const CMatrix<double>& a) {
  auto value_at = [&](double t1, double p1, double t2, double p2) {
    return sigma2_max(inner_block(a, bloch_vector(t1, p1), bloch_vector(t2, p2)));
  };
  const int n = 10;  // (10 x 10)^2 = 10^4 outer pairs
  double best = -1e300;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2) {
          const double t1 = std::numbers::pi * (i1 + 0.5) / n;
          const double p1 = 2 * std::numbers::pi * j1 / n;
          const double t2 = std::numbers::pi * (i2 + 0.5) / n;
          const double p2 = 2 * std::numbers::pi * j2 / n;
          const double v = value_at(t1, p1, t2, p2);
          if (v > best) {
            best = v;
            b1 = t1;
            b2 = p1;
            b3 = t2;
            b4 = p2;
          }
        }
  double span_t = std::numbers::pi / n, span_p = 2 * std::numbers::pi / n;
  for (int round = 0; round < 5; ++round) {
    const int refine = 5;
    double r1 = b1, r2 = b2, r3 = b3, r4 = b4;
    for (int i1 = -refine; i1 <= refine; ++i1)
      for (int j1 = -refine; j1 <= refine; ++j1)
        for (int i2 = -refine; i2 <= refine; ++i2)
          for (int j2 = -refine; j2 <= refine; ++j2) {
            const double t1 = std::clamp(b1 + span_t * i1 / refine, 0.0, std::numbers::pi);
            const double p1 = b2 + span_p * j1 / refine;
            const double t2 = std::clamp(b3 + span_t * i2 / refine, 0.0, std::numbers::pi);
            const double p2 = b4 + span_p * j2 / refine;
            const double v = value_at(t1, p1, t2, p2);
            if (v > best) {
              best = v;
              r1 = t1;
              r2 = p1;
              r3 = t2;
              r4 = p2;
            }
          }
    b1 = r1;
    b2 = r2;
    b3 = r3;
    b4 = r4;
    span_t /= refine * 0.5;
    span_p /= refine * 0.5;
  }
  return best;
}

inline CMatrix<double> kron(const CMatrix<double>& a, const CMatrix<double>& b) {
  CMatrix<double> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Direct Frobenius distance of the two projectors, no closed form.
inline double projector_distance_direct(const BipartiteVector<double>& xi,
                                        const BipartiteVector<double>& eta) {
  const CMatrix<double> p = xi.amps * xi.amps.adjoint();
  const CMatrix<double> q = eta.amps * eta.amps.adjoint();
  return (p - q).norm();
}

}  // namespace oracles
