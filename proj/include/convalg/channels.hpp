#pragma once

// Kraus representations, channel predicates and named channels.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "convalg/errors.hpp"
#include "convalg/linalg.hpp"
#include "convalg/random.hpp"
#include "convalg/superop.hpp"

namespace convalg {

/// Operator-sum representation x -> sum_i K_i x K_i^dagger, each K_i of shape m x n.
class KrausSet {
 public:
  KrausSet(Index in_dim, Index out_dim, std::vector<CMat> ops)
      : n_(in_dim), m_(out_dim), ops_(std::move(ops)) {
    if (ops_.empty()) throw ShapeMismatch("KrausSet: at least one operator is required");
    for (std::size_t k = 0; k < ops_.size(); ++k)
      if (ops_[k].rows() != m_ || ops_[k].cols() != n_)
        throw ShapeMismatch("KrausSet: operator " + std::to_string(k) + " is " +
                            std::to_string(ops_[k].rows()) + "x" + std::to_string(ops_[k].cols()) +
                            ", expected " + std::to_string(m_) + "x" + std::to_string(n_));
  }

  /// Dimensions taken from the first operator.
  explicit KrausSet(std::vector<CMat> ops)
      : KrausSet(front_cols(ops), front_rows(ops), std::vector<CMat>(ops)) {}

  Index in_dim() const { return n_; }
  Index out_dim() const { return m_; }
  std::size_t size() const { return ops_.size(); }
  const std::vector<CMat>& ops() const { return ops_; }
  const CMat& operator[](std::size_t k) const { return ops_[k]; }

  /// sum_i K_i^dagger K_i
  CMat gram_sum() const {
    CMat s = CMat::Zero(n_, n_);
    for (const auto& k : ops_) s += k.adjoint() * k;
    return s;
  }

  bool is_trace_preserving(double tol = 1e-9) const {
    return max_abs(gram_sum() - CMat::Identity(n_, n_)) <= tol;
  }

 private:
  static Index front_rows(const std::vector<CMat>& ops) { return ops.empty() ? 0 : ops.front().rows(); }
  static Index front_cols(const std::vector<CMat>& ops) { return ops.empty() ? 0 : ops.front().cols(); }

  Index n_;
  Index m_;
  std::vector<CMat> ops_;
};

inline SuperOp from_kraus(const KrausSet& ks) {
  // Row-major vectorisation: vec(K x K^dagger) = (K (x) conj(K)) vec(x).
  CMat aform = CMat::Zero(ks.out_dim() * ks.out_dim(), ks.in_dim() * ks.in_dim());
  for (const auto& k : ks.ops()) aform += kron(k, k.conjugate());
  return {ks.in_dim(), ks.out_dim(), std::move(aform)};
}

inline double default_rank_tol(const CMat& choi) {
  return 1e-9 * std::max(1.0, std::abs(choi.trace()));
}

/// Kraus operators K_i = sqrt(lambda_i) unvec(v_i) from the Choi eigenpairs above
/// `rank_tol`, with unvec(v)(p, i) = v(i*m + p). The result is Hilbert-Schmidt
/// orthogonal: tr(K_i^dagger K_j) = lambda_i delta_ij.
inline KrausSet minimal_kraus(const SuperOp& phi, std::optional<double> rank_tol = std::nullopt) {
  const Index n = phi.in_dim(), m = phi.out_dim();
  const CMat choi = to_choi(phi);
  const double tol = rank_tol.value_or(default_rank_tol(choi));
  if (!is_hermitian(choi)) throw NotCP("minimal_kraus: Choi matrix is not Hermitian");
  const auto eig = eig_hermitian(choi);
  if (eig.values.minCoeff() < -tol)
    throw NotCP("minimal_kraus: Choi matrix has eigenvalue " + std::to_string(eig.values.minCoeff()));

  std::vector<CMat> ops;
  for (Index k = eig.values.size(); k-- > 0;) {
    const double lambda = eig.values[k];
    if (lambda <= tol) continue;
    CMat op(m, n);
    for (Index i = 0; i < n; ++i)
      for (Index p = 0; p < m; ++p) op(p, i) = eig.vectors(i * m + p, k);
    ops.push_back(std::sqrt(lambda) * op);
  }
  if (ops.empty()) ops.push_back(CMat::Zero(m, n));
  return {n, m, std::move(ops)};
}

struct ChannelReport {
  bool is_cp = false;
  bool is_tp = false;
  bool is_unital = false;
  bool is_unitary = false;
  double min_choi_eigenvalue = 0.0;
  int kraus_rank = 0;
};

/// Channel predicates read off the Choi matrix.
///
/// For a non-Hermitian Choi matrix is_cp is false and min_choi_eigenvalue
/// reports the smallest eigenvalue of its Hermitian part.
inline ChannelReport channel_checks(const SuperOp& phi, double tol = 1e-9) {
  const Index n = phi.in_dim(), m = phi.out_dim();
  const CMat choi = to_choi(phi);
  const bool hermitian = is_hermitian(choi);
  const auto eig = eig_hermitian(hermitian ? choi : CMat(0.5 * (choi + choi.adjoint())));

  ChannelReport r;
  r.min_choi_eigenvalue = eig.values.minCoeff();
  r.is_cp = hermitian && r.min_choi_eigenvalue >= -tol;
  const double rank_tol = default_rank_tol(choi);
  r.kraus_rank = static_cast<int>((eig.values.array() > rank_tol).count());

  const FactorShape shape{n, m};
  r.is_tp = max_abs(partial_trace(choi, shape, {0}) - CMat::Identity(n, n)) <= tol;
  r.is_unital = max_abs(partial_trace(choi, shape, {1}) - CMat::Identity(m, m)) <= tol;
  if (r.is_cp && r.is_tp) {
    const SuperOp sq = convolve(phi, phi);
    r.is_unitary = distance(sq, static_cast<double>(n) * phi) <= tol * static_cast<double>(n);
  }
  return r;
}

inline SuperOp unitary_channel(const CMat& u) {
  if (u.rows() != u.cols()) throw NotUnitary("unitary_channel: matrix is not square");
  const double dev = max_abs(u.adjoint() * u - CMat::Identity(u.rows(), u.cols()));
  if (dev > 1e-9) throw NotUnitary("unitary_channel: max |U^dagger U - I| = " + std::to_string(dev));
  return from_kraus(KrausSet({u}));
}

/// x -> x^T on B(C^n).
inline SuperOp transposition_map(Index n) {
  CMat aform = CMat::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) aform(k * n + i, i * n + k) = 1.0;
  return {n, n, std::move(aform)};
}

/// Schur multiplier x -> a o x (entrywise product).
inline SuperOp schur_map(const CMat& a) {
  if (a.rows() != a.cols()) throw NotSquare("schur_map: multiplier must be square");
  const Index n = a.rows();
  CMat aform = CMat::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) aform(i * n + k, i * n + k) = a(i, k);
  return {n, n, std::move(aform)};
}

/// Complementary channel x -> sum_pq tr(M_q^dagger M_p x) e_pq, with output
/// dimension equal to the number of Kraus operators.
inline SuperOp complementary_channel(const KrausSet& ks) {
  const Index n = ks.in_dim();
  const auto d = static_cast<Index>(ks.size());
  CMat aform = CMat::Zero(d * d, n * n);
  for (Index p = 0; p < d; ++p)
    for (Index q = 0; q < d; ++q) {
      const CMat g = ks[static_cast<std::size_t>(q)].adjoint() * ks[static_cast<std::size_t>(p)];
      // tr(G e_ik) = G(k, i)
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k) aform(p * d + q, i * n + k) = g(k, i);
    }
  return {n, d, std::move(aform)};
}

/// Convolution of two CP maps from their Kraus sets:
/// x -> sum_pq tr(M_p^dagger N_q) M_p x N_q^dagger.
inline SuperOp convolve_kraus(const KrausSet& ks1, const KrausSet& ks2) {
  if (ks1.in_dim() != ks2.in_dim() || ks1.out_dim() != ks2.out_dim())
    throw ShapeMismatch("convolve_kraus: Kraus sets act between different spaces");
  const Index n = ks1.in_dim(), m = ks1.out_dim();
  CMat aform = CMat::Zero(m * m, n * n);
  for (const auto& mp : ks1.ops())
    for (const auto& nq : ks2.ops()) {
      const cplx weight = (mp.adjoint() * nq).trace();
      if (weight == cplx(0.0)) continue;
      aform += weight * kron(mp, nq.conjugate());
    }
  return {n, m, std::move(aform)};
}

/// Single-qubit amplitude damping with decay probability gamma.
inline KrausSet amplitude_damping(double gamma) {
  CMat k0 = CMat::Zero(2, 2), k1 = CMat::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausSet({k0, k1});
}

/// Random CPTP map with `k` Kraus operators: Gaussian G_i normalised as G_i S^{-1/2}, S = sum G^dagger G.
inline KrausSet random_channel(Index n, Index m, std::size_t k, Rng& rng) {
  if (static_cast<Index>(k) * m < n)
    throw ShapeMismatch("random_channel: need k * m >= n for a trace-preserving map");
  std::vector<CMat> ops;
  CMat s = CMat::Zero(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    ops.push_back(ginibre(m, n, rng));
    s += ops.back().adjoint() * ops.back();
  }
  const CMat norm = inverse_sqrt_psd(s);
  for (auto& op : ops) op = op * norm;
  return {n, m, std::move(ops)};
}

/// Random unital channel on B(C^n): a convex mixture of `k` Haar unitary channels.
inline KrausSet random_unital_channel(Index n, std::size_t k, Rng& rng) {
  const auto weights = random_simplex(k, rng);
  std::vector<CMat> ops;
  for (double w : weights) ops.push_back(std::sqrt(w) * random_unitary(n, rng));
  return {n, n, std::move(ops)};
}

}  // namespace convalg
