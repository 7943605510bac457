// Choi-Jamiolkowski machinery and cone duality: Choi matrices of maps given
// as superoperators or Kraus lists, trace-preserving / unital checks,
// k-block positivity certification, base duality, the partial-transpose
// criterion, and Schmidt-number membership brackets for states.
//
// Conventions:
//   - the Choi matrix is C = sum_{ij} E_ij (x) Phi(E_ij), stored so that the
//     d x d block at (i*d, j*d) equals Phi(E_ij);
//   - Kraus action is Phi(rho) = sum_l A_l^dag rho A_l, so the Choi matrix is
//     the sum of projectors onto the row-vectorized conj(A_l);
//   - partial transposition acts on the second tensor factor.

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entgeo/seesaw.hpp"
#include "entgeo/tensor.hpp"
#include "entgeo/types.hpp"

namespace entgeo {

enum class Flag { yes, no, unknown };

template <typename Scalar>
CMatrix<Scalar> partial_trace_first(const CMatrix<Scalar>& m, Index d) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw std::invalid_argument("partial_trace_first: expected a d^2 x d^2 matrix");
  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index jp = 0; jp < d; ++jp)
      for (Index i = 0; i < d; ++i) out(j, jp) += m(i * d + j, i * d + jp);
  return out;
}

template <typename Scalar>
CMatrix<Scalar> partial_trace_second(const CMatrix<Scalar>& m, Index d) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw std::invalid_argument("partial_trace_second: expected a d^2 x d^2 matrix");
  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index ip = 0; ip < d; ++ip)
      for (Index j = 0; j < d; ++j) out(i, ip) += m(i * d + j, ip * d + j);
  return out;
}

template <typename Scalar>
CMatrix<Scalar> partial_transpose_second(const CMatrix<Scalar>& m, Index d) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw std::invalid_argument("partial_transpose_second: expected a d^2 x d^2 matrix");
  CMatrix<Scalar> out(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index ip = 0; ip < d; ++ip)
        for (Index jp = 0; jp < d; ++jp)
          out(i * d + j, ip * d + jp) = m(i * d + jp, ip * d + j);
  return out;
}

/// Linear map on d x d matrices stored via its Choi matrix.
template <typename Scalar = double>
struct QuantumMap {
  Index d = 0;
  HermitianOperator<Scalar> choi;
  std::vector<CMatrix<Scalar>> kraus;  // empty when not supplied
  Flag trace_preserving = Flag::unknown;
  Flag unital = Flag::unknown;
};

template <typename Scalar>
bool is_trace_preserving(const QuantumMap<Scalar>& m, Scalar tol = Scalar(1e-10)) {
  const CMatrix<Scalar> reduced = partial_trace_second(m.choi.mat, m.d);
  return (reduced - CMatrix<Scalar>::Identity(m.d, m.d)).norm() <= tol;
}

template <typename Scalar>
bool is_unital(const QuantumMap<Scalar>& m, Scalar tol = Scalar(1e-10)) {
  const CMatrix<Scalar> reduced = partial_trace_first(m.choi.mat, m.d);
  return (reduced - CMatrix<Scalar>::Identity(m.d, m.d)).norm() <= tol;
}

namespace detail {
template <typename Scalar>
void classify_map(QuantumMap<Scalar>& m) {
  m.trace_preserving = is_trace_preserving(m) ? Flag::yes : Flag::no;
  m.unital = is_unital(m) ? Flag::yes : Flag::no;
}
}  // namespace detail

/// Map from its Kraus factors, Phi(rho) = sum_l A_l^dag rho A_l.
template <typename Scalar = double>
QuantumMap<Scalar> choi_of_kraus(Index d, std::span<const CMatrix<Scalar>> kraus) {
  if (d < 1) throw std::invalid_argument("choi_of_kraus: d must be >= 1");
  if (kraus.empty()) throw std::invalid_argument("choi_of_kraus: empty Kraus list");
  CMatrix<Scalar> c = CMatrix<Scalar>::Zero(d * d, d * d);
  for (const auto& a : kraus) {
    if (a.rows() != d || a.cols() != d)
      throw std::invalid_argument("choi_of_kraus: Kraus factor dimension mismatch");
    const BipartiteVector<Scalar> chi =
        BipartiteVector<Scalar>::from_matrix(a.conjugate().eval());
    c += chi.amps * chi.amps.adjoint();
  }
  QuantumMap<Scalar> m;
  m.d = d;
  m.choi = hermitian_part(c);
  m.kraus.assign(kraus.begin(), kraus.end());
  detail::classify_map(m);
  return m;
}

/// Map from its superoperator matrix S acting on row-vectorized inputs:
/// vec(Phi(X)) = S vec(X).
template <typename Scalar = double>
QuantumMap<Scalar> choi_of_superop(const CMatrix<Scalar>& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("choi_of_superop: square matrix required");
  const Index d = detail::local_dim_of(s.rows(), "choi_of_superop");
  CMatrix<Scalar> c(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const CVector<Scalar> col = s.col(i * d + j);
      for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) c(i * d + a, j * d + b) = col(a * d + b);
    }
  if ((c - c.adjoint()).norm() > Scalar(1e-10) * std::max(Scalar(1), c.norm()))
    throw std::invalid_argument("choi_of_superop: map is not Hermiticity-preserving");
  QuantumMap<Scalar> m;
  m.d = d;
  m.choi = hermitian_part(c);
  detail::classify_map(m);
  return m;
}

/// Wraps an already-assembled Choi matrix.
template <typename Scalar = double>
QuantumMap<Scalar> map_of_choi(HermitianOperator<Scalar> choi) {
  QuantumMap<Scalar> m;
  m.d = detail::local_dim_of(choi.dim(), "map_of_choi");
  m.choi = std::move(choi);
  detail::classify_map(m);
  return m;
}

/// Phi(X) reconstructed from the Choi blocks.
template <typename Scalar>
CMatrix<Scalar> apply_map(const QuantumMap<Scalar>& m, const CMatrix<Scalar>& x) {
  if (x.rows() != m.d || x.cols() != m.d)
    throw std::invalid_argument("apply_map: input dimension mismatch");
  CMatrix<Scalar> out = CMatrix<Scalar>::Zero(m.d, m.d);
  for (Index i = 0; i < m.d; ++i)
    for (Index j = 0; j < m.d; ++j)
      out += x(i, j) * m.choi.mat.block(i * m.d, j * m.d, m.d, m.d);
  return out;
}

/// Superoperator matrix on row-vectorized inputs, inverse of choi_of_superop.
template <typename Scalar>
CMatrix<Scalar> superop_of_choi(const QuantumMap<Scalar>& m) {
  const Index d = m.d;
  CMatrix<Scalar> s(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      const CMatrix<Scalar> block = m.choi.mat.block(i * d, j * d, d, d);
      for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) s(a * d + b, i * d + j) = block(a, b);
    }
  return s;
}

/// Certificate for the k-block positivity test.  "refuted" carries a witness
/// with a strictly negative form value; "not_refuted" is a one-sided see-saw
/// outcome, while "positive" is reserved for the exact regimes (PSD Choi, or
/// the k = d eigenvalue check).
template <typename Scalar = double>
struct BlockPositivityCertificate {
  enum class Verdict { positive, not_refuted, refuted };
  Verdict verdict = Verdict::not_refuted;
  Index k = 0;
  Scalar min_estimate = 0;
  bool exact = false;
  std::optional<BipartiteVector<Scalar>> witness;
};

template <typename Scalar = double>
BlockPositivityCertificate<Scalar> k_block_positivity(const QuantumMap<Scalar>& m, Index k,
                                                      const SeeSawConfig<Scalar>& cfg = {},
                                                      Scalar tol = Scalar(1e-10)) {
  using Cert = BlockPositivityCertificate<Scalar>;
  detail::check_k(m.d, k, "k_block_positivity");
  Cert cert;
  cert.k = k;

  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(m.choi.mat);
  const Scalar lambda_min = es.eigenvalues()(0);
  if (lambda_min >= -tol) {
    // PSD Choi: <eta|C|eta> >= 0 for every eta, in particular rank <= k ones.
    cert.verdict = Cert::Verdict::positive;
    cert.min_estimate = lambda_min;
    cert.exact = true;
    return cert;
  }
  if (k == m.d) {
    cert.verdict = Cert::Verdict::refuted;
    cert.min_estimate = lambda_min;
    cert.exact = true;
    cert.witness = BipartiteVector<Scalar>(m.d, es.eigenvectors().col(0));
    return cert;
  }

  const ExtremalResult<Scalar> r = quadratic_extremum_k(m.choi, k, ExtremumSense::min, cfg);
  cert.min_estimate = r.value;
  cert.witness = r.witnesses[0];
  cert.verdict = r.value < -tol ? Cert::Verdict::refuted : Cert::Verdict::not_refuted;
  return cert;
}

/// Base-duality membership test for a normalized direction y (with
/// <y, e> = 1, e = I/d): the route through the dual-base inequality
/// max_{x in the rescaled rank-<= k state base} <e - y, x - e> <= 1 and the
/// direct route min_eta <eta|y|eta> >= 0 are affinely related by
/// slack = 1 - d * min.  Both see-saws share their witness pools, so the
/// reported slacks satisfy the identity at float precision.
template <typename Scalar = double>
struct DualityCertificate {
  bool member = false;
  bool exact = false;        // PSD shortcut or k = d
  Scalar slack_bases = 0;    // dual-base route, membership iff <= 1
  Scalar direct_min = 0;     // direct route, membership iff >= 0
  bool routes_agree = false;
  BipartiteVector<Scalar> witness;
};

template <typename Scalar = double>
DualityCertificate<Scalar> base_dual_test(const HermitianOperator<Scalar>& y, Index k,
                                          const SeeSawConfig<Scalar>& cfg = {},
                                          Scalar member_tol = Scalar(1e-9)) {
  const Index d = detail::local_dim_of(y.dim(), "base_dual_test");
  detail::check_k(d, k, "base_dual_test");
  const Scalar normalization = y.trace() / Scalar(d);  // <y, e> with e = I/d
  if (std::abs(normalization - Scalar(1)) > Scalar(1e-10))
    throw std::invalid_argument("base_dual_test: <y, e> must equal 1");

  const HermitianOperator<Scalar> direction{
      (CMatrix<Scalar>::Identity(d * d, d * d) / Scalar(d) - y.mat).eval()};  // e - y

  const ExtremalResult<Scalar> direct = quadratic_extremum_k(y, k, ExtremumSense::min, cfg);
  SeeSawConfig<Scalar> cfg_dual = cfg;
  cfg_dual.substream_base = cfg.substream_base + (1u << 21);
  cfg_dual.initial_guesses.push_back(direct.witnesses[0]);
  const ExtremalResult<Scalar> dual = support_entk(direction, k, cfg_dual);

  // Pool the two witnesses; the objectives are affine images of each other,
  // so one vector optimizes both.
  auto y_form = [&](const BipartiteVector<Scalar>& v) {
    return v.amps.dot(y.mat * v.amps).real();
  };
  const Scalar m_direct = y_form(direct.witnesses[0]);
  const Scalar m_dual = y_form(dual.witnesses[0]);
  const BipartiteVector<Scalar>& best =
      m_direct <= m_dual ? direct.witnesses[0] : dual.witnesses[0];

  DualityCertificate<Scalar> cert;
  cert.direct_min = y_form(best);
  cert.slack_bases = Scalar(d) * best.amps.dot(direction.mat * best.amps).real();
  cert.witness = best;

  const bool member_direct = cert.direct_min >= -member_tol;
  const bool member_dual = cert.slack_bases <= Scalar(1) + Scalar(d) * member_tol;
  cert.member = member_direct;
  cert.routes_agree =
      member_direct == member_dual &&
      std::abs(cert.slack_bases - (Scalar(1) - Scalar(d) * cert.direct_min)) <= Scalar(1e-8);

  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(y.mat, Eigen::EigenvaluesOnly);
  const Scalar lambda_min = es.eigenvalues()(0);
  if (lambda_min >= -member_tol) {
    cert.member = true;  // PSD implies k-block positivity for every k
    cert.exact = true;
  } else if (k == d) {
    cert.member = lambda_min >= -member_tol;
    cert.direct_min = lambda_min;
    cert.slack_bases = Scalar(1) - Scalar(d) * lambda_min;
    cert.exact = true;
  }
  return cert;
}

template <typename Scalar = double>
struct PptResult {
  bool is_ppt = false;
  Scalar lambda_min = 0;  // smallest eigenvalue of the partial transpose
};

/// Partial-transpose criterion (transpose on the second factor); a necessary
/// condition for separability, exact at d = 2.
template <typename Scalar = double>
PptResult<Scalar> ppt_test(const DensityMatrix<Scalar>& rho, Scalar tol = Scalar(1e-10)) {
  const Index d = detail::local_dim_of(rho.dim(), "ppt_test");
  const CMatrix<Scalar> pt = partial_transpose_second(rho.matrix(), d);
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(pt, Eigen::EigenvaluesOnly);
  const Scalar lambda_min = es.eigenvalues()(0);
  return {lambda_min >= -tol, lambda_min};
}

/// Best overlap with a maximally entangled vector, optimized over local
/// frames: max over unitary W of <chi_W| rho |chi_W> with chi_W the
/// row-vectorization of W / sqrt(d).  See-saw with polar-projection steps.
template <typename Scalar = double>
struct FidelityResult {
  Scalar value = 0;
  BipartiteVector<Scalar> witness;
  bool converged = false;
};

template <typename Scalar = double>
FidelityResult<Scalar> max_entangled_fidelity(const DensityMatrix<Scalar>& rho,
                                              const SeeSawConfig<Scalar>& cfg = {}) {
  detail::validate_config(cfg);
  const Index d = detail::local_dim_of(rho.dim(), "max_entangled_fidelity");
  const CMatrix<Scalar>& r = rho.matrix();
  const Scalar sigma = r.norm();
  const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(Scalar(d));

  auto polar_direction = [&](const CMatrix<Scalar>& m) -> std::optional<BipartiteVector<Scalar>> {
    if (m.norm() <= Scalar(0)) return std::nullopt;
    Eigen::JacobiSVD<CMatrix<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix<Scalar> w = svd.matrixU() * svd.matrixV().adjoint();
    return BipartiteVector<Scalar>::from_matrix((w * inv_sqrt_d).eval());
  };

  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(r);
  const auto warm = polar_direction(
      CMatrix<Scalar>(BipartiteVector<Scalar>(d, es.eigenvectors().col(rho.dim() - 1))
                          .matrix_view()));

  auto run_restart = [&](int rr) {
    detail::RestartOutcome<Scalar> out;
    BipartiteVector<Scalar> chi;
    if (rr == 0 && warm) {
      chi = *warm;
    } else {
      PhiloxRng rng(cfg.rng, cfg.substream_base + static_cast<std::uint64_t>(rr));
      CMatrix<Scalar> g(d, d);
      for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) g(i, j) = detail::complex_gaussian<Scalar>(rng);
      const auto start = polar_direction(g);
      if (!start) return out;
      chi = *start;
    }
    auto objective = [&](const BipartiteVector<Scalar>& v) {
      return v.amps.dot(r * v.amps).real();
    };
    Scalar value = objective(chi);
    out.trace.push_back(value);
    Scalar prev = -std::numeric_limits<Scalar>::infinity();
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
      const CVector<Scalar> yv = sigma * chi.amps + r * chi.amps;
      const auto next = polar_direction(CMatrix<Scalar>(BipartiteVector<Scalar>(d, yv).matrix_view()));
      if (!next) break;
      chi = *next;
      const Scalar f = objective(chi);
      detail::check_monotone(f, value, "max_entangled_fidelity");
      value = f;
      out.trace.push_back(value);
      if (value - prev <= cfg.tol * std::max(Scalar(1), std::abs(value))) {
        out.converged = true;
        break;
      }
      prev = value;
    }
    out.value = value;
    out.witnesses = {chi};
    out.valid = true;
    return out;
  };

  auto partials = run_blocks<detail::RestartOutcome<Scalar>>(
      static_cast<std::uint64_t>(cfg.restarts), cfg.workers,
      [&](std::uint64_t first, std::uint64_t last, detail::RestartOutcome<Scalar>& slot) {
        for (std::uint64_t rr = first; rr < last; ++rr) slot = run_restart(static_cast<int>(rr));
      },
      /*block_size=*/1);
  const detail::RestartOutcome<Scalar> best = detail::best_outcome(std::move(partials));
  return {best.value, best.witnesses[0], best.converged};
}

/// Membership bracket for Schmidt number <= k.  "no" certificates carry a
/// k-block positive witness with tr(W rho) < 0; "yes" certificates name the
/// exact criterion that fired.
template <typename Scalar = double>
struct MembershipBracket {
  struct Confirmation {
    std::string criterion;
    std::optional<BipartiteVector<Scalar>> pure_vector;
  };
  struct Refutation {
    std::string criterion;
    HermitianOperator<Scalar> witness;
    Scalar violation = 0;  // tr(witness * rho) < 0
  };

  Flag decided = Flag::unknown;
  std::optional<Confirmation> lower;
  std::optional<Refutation> upper;
};

template <typename Scalar = double>
MembershipBracket<Scalar> schmidt_number_bracket(
    const DensityMatrix<Scalar>& rho, Index k, const SeeSawConfig<Scalar>& cfg = {},
    std::span<const HermitianOperator<Scalar>> supplied_witnesses = {}) {
  using Bracket = MembershipBracket<Scalar>;
  const Index d = detail::local_dim_of(rho.dim(), "schmidt_number_bracket");
  detail::check_k(d, k, "schmidt_number_bracket");
  Bracket out;

  auto confirm = [&](std::string criterion, std::optional<BipartiteVector<Scalar>> pure) {
    out.decided = Flag::yes;
    out.lower = typename Bracket::Confirmation{std::move(criterion), std::move(pure)};
    return out;
  };
  auto refute = [&](std::string criterion, HermitianOperator<Scalar> witness, Scalar violation) {
    out.decided = Flag::no;
    out.upper = typename Bracket::Refutation{std::move(criterion), std::move(witness), violation};
    return out;
  };

  if (k == d) return confirm("k-equals-d", std::nullopt);

  if (k == 1) {
    const PptResult<Scalar> ppt = ppt_test(rho);
    if (!ppt.is_ppt) {
      const CMatrix<Scalar> pt = partial_transpose_second(rho.matrix(), d);
      Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> pes(pt);
      const CVector<Scalar> v = pes.eigenvectors().col(0);
      HermitianOperator<Scalar> w{partial_transpose_second(CMatrix<Scalar>(v * v.adjoint()), d)};
      const Scalar violation = (w.mat * rho.matrix()).trace().real();
      return refute("ppt", std::move(w), violation);
    }
    if (d == 2) return confirm("ppt-2x2-exact", std::nullopt);  // exact regime
  }

  // Pure states are fully decidable: the principal eigenvector either has
  // rank <= k, or it yields a violated witness c I - |xi><xi| with
  // c = k_norm(xi, k)^2.
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> es(rho.matrix());
  const Index n = rho.dim();
  if (n == 1 || es.eigenvalues()(n - 2) <= Scalar(1e-10)) {
    const BipartiteVector<Scalar> xi(d, es.eigenvectors().col(n - 1));
    if (schmidt_rank(xi) <= k) return confirm("pure-schmidt-rank", xi);
    const Scalar c = k_norm(xi, k);
    HermitianOperator<Scalar> w{
        (c * c * CMatrix<Scalar>::Identity(n, n) - xi.amps * xi.amps.adjoint()).eval()};
    const Scalar violation = (w.mat * rho.matrix()).trace().real();
    if (violation < -Scalar(1e-10)) return refute("pure-rank-witness", std::move(w), violation);
  }

  for (const auto& w : supplied_witnesses) {
    const Scalar violation = (w.mat * rho.matrix()).trace().real();
    if (violation < -Scalar(1e-10)) return refute("supplied-witness", w, violation);
  }

  // Fidelity witness with optimized local frames: support of the rank-<= k
  // body on any maximally entangled projector is k/d, so an overlap beyond
  // k/d refutes membership.
  const FidelityResult<Scalar> fid = max_entangled_fidelity(rho, cfg);
  const Scalar threshold = Scalar(k) / Scalar(d);
  if (fid.value > threshold + Scalar(1e-9)) {
    HermitianOperator<Scalar> w{(threshold * CMatrix<Scalar>::Identity(n, n) -
                                 fid.witness.amps * fid.witness.amps.adjoint())
                                    .eval()};
    const Scalar violation = (w.mat * rho.matrix()).trace().real();
    return refute("fidelity", std::move(w), violation);
  }

  return out;  // unknown
}

}  // namespace entgeo
