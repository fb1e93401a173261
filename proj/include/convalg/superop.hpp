#pragma once

// Linear maps B(C^n) -> B(C^m) and their convolution algebra.
//
// A map is stored in A-form: an m^2 x n^2 matrix whose column c = i*n + k
// holds the row-major vectorisation of phi(e_ik), i.e. aform(p*m + q, i*n + k)
// is the (p, q) entry of phi(e_ik). The Choi matrix (B-form) is
// sum_ij e_ij (x) phi(e_ij), an nm x nm matrix, kept unnormalised.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "convalg/errors.hpp"
#include "convalg/linalg.hpp"

namespace convalg {

class SuperOp {
 public:
  SuperOp(Index in_dim, Index out_dim, CMat aform)
      : n_(in_dim), m_(out_dim), aform_(std::move(aform)) {
    if (n_ <= 0 || m_ <= 0) throw ShapeMismatch("SuperOp: dimensions must be positive");
    if (aform_.rows() != m_ * m_ || aform_.cols() != n_ * n_)
      throw ShapeMismatch("SuperOp: A-form must be " + std::to_string(m_ * m_) + "x" +
                          std::to_string(n_ * n_) + ", got " + std::to_string(aform_.rows()) + "x" +
                          std::to_string(aform_.cols()));
  }

  static SuperOp zero(Index in_dim, Index out_dim) {
    return {in_dim, out_dim, CMat::Zero(out_dim * out_dim, in_dim * in_dim)};
  }

  Index in_dim() const { return n_; }
  Index out_dim() const { return m_; }
  const CMat& aform() const { return aform_; }

  SuperOp& operator+=(const SuperOp& o) {
    require_same_dims(o, "operator+");
    aform_ += o.aform_;
    return *this;
  }
  SuperOp& operator-=(const SuperOp& o) {
    require_same_dims(o, "operator-");
    aform_ -= o.aform_;
    return *this;
  }
  SuperOp& operator*=(cplx s) {
    aform_ *= s;
    return *this;
  }

  friend SuperOp operator+(SuperOp a, const SuperOp& b) { return a += b; }
  friend SuperOp operator-(SuperOp a, const SuperOp& b) { return a -= b; }
  friend SuperOp operator*(cplx s, SuperOp a) { return a *= s; }
  friend SuperOp operator*(SuperOp a, cplx s) { return a *= s; }

  bool same_dims(const SuperOp& o) const { return n_ == o.n_ && m_ == o.m_; }

  void require_same_dims(const SuperOp& o, const char* what) const {
    if (!same_dims(o))
      throw ShapeMismatch(std::string(what) + ": maps " + std::to_string(n_) + "->" + std::to_string(m_) +
                          " and " + std::to_string(o.n_) + "->" + std::to_string(o.m_) + " differ in shape");
  }

 private:
  Index n_;
  Index m_;
  CMat aform_;
};

/// Distance between two maps of equal shape, as the Frobenius norm of the A-form difference.
inline double distance(const SuperOp& a, const SuperOp& b) {
  a.require_same_dims(b, "distance");
  return (a.aform() - b.aform()).norm();
}

enum class TauDirection { AtoB, BtoA };

/// Index reshuffle between A-form (m^2 x n^2) and B-form (nm x nm):
/// B(i*m + p, j*m + q) = A(p*m + q, i*n + j).
///
/// The direction is inferred from the shape of `a`; when n == m both shapes
/// coincide and `dir` must be given.
inline CMat tau(const CMat& a, Index n, Index m, std::optional<TauDirection> dir = std::nullopt) {
  const bool looks_a = a.rows() == m * m && a.cols() == n * n;
  const bool looks_b = a.rows() == n * m && a.cols() == n * m;
  if (!dir) {
    if (looks_a && looks_b)
      throw ShapeMismatch("tau: direction is ambiguous for n == m; pass an explicit TauDirection");
    if (looks_a) dir = TauDirection::AtoB;
    else if (looks_b) dir = TauDirection::BtoA;
    else throw ShapeMismatch("tau: matrix shape matches neither A-form nor B-form");
  }

  if (*dir == TauDirection::AtoB) {
    if (!looks_a) throw ShapeMismatch("tau: expected an A-form of shape m^2 x n^2");
    CMat b(n * m, n * m);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index p = 0; p < m; ++p)
          for (Index q = 0; q < m; ++q) b(i * m + p, j * m + q) = a(p * m + q, i * n + j);
    return b;
  }

  if (!looks_b) throw ShapeMismatch("tau: expected a B-form of shape nm x nm");
  CMat out(m * m, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index p = 0; p < m; ++p)
        for (Index q = 0; q < m; ++q) out(p * m + q, i * n + j) = a(i * m + p, j * m + q);
  return out;
}

inline CMat to_choi(const SuperOp& phi) {
  return tau(phi.aform(), phi.in_dim(), phi.out_dim(), TauDirection::AtoB);
}

inline SuperOp from_choi(const CMat& rho, Index n, Index m) {
  if (rho.rows() != n * m || rho.cols() != n * m)
    throw ShapeMismatch("from_choi: expected a " + std::to_string(n * m) + "x" + std::to_string(n * m) +
                        " matrix");
  return {n, m, tau(rho, n, m, TauDirection::BtoA)};
}

inline CMat apply(const SuperOp& phi, const CMat& x) {
  const Index n = phi.in_dim(), m = phi.out_dim();
  if (x.rows() != n || x.cols() != n)
    throw ShapeMismatch("apply: argument must be " + std::to_string(n) + "x" + std::to_string(n));
  const CVec vec = Eigen::Map<const CVec>(x.data(), x.size());
  const CVec out = phi.aform() * vec;
  return Eigen::Map<const CMat>(out.data(), m, m);
}

/// The convolution product: (phi1 * phi2)(e_ij) = sum_k phi1(e_ik) phi2(e_kj).
/// Computed through the B-form, where it becomes an ordinary matrix product.
inline SuperOp convolve(const SuperOp& phi1, const SuperOp& phi2) {
  phi1.require_same_dims(phi2, "convolve");
  return from_choi(to_choi(phi1) * to_choi(phi2), phi1.in_dim(), phi1.out_dim());
}

/// Ordinary composition phi1 o phi2 (phi2 applied first).
inline SuperOp compose(const SuperOp& phi1, const SuperOp& phi2) {
  if (phi2.out_dim() != phi1.in_dim())
    throw ShapeMismatch("compose: output dimension " + std::to_string(phi2.out_dim()) +
                        " of the inner map differs from input dimension " + std::to_string(phi1.in_dim()));
  return {phi2.in_dim(), phi1.out_dim(), phi1.aform() * phi2.aform()};
}

/// phi(e_il) = delta_il * I_m, the completely depolarizing map and unit of the convolution.
inline SuperOp identity_element(Index n, Index m) {
  CMat aform = CMat::Zero(m * m, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index p = 0; p < m; ++p) aform(p * m + p, i * n + i) = 1.0;
  return {n, m, std::move(aform)};
}

/// The identity channel x -> x on B(C^n).
inline SuperOp identity_channel(Index n) { return {n, n, CMat::Identity(n * n, n * n)}; }

inline double norm_lp(const SuperOp& phi, int p) { return entrywise_norm(phi.aform(), p); }

/// Eigenvalues of the Choi matrix, grouped into clusters of numerically equal values.
struct Spectrum {
  CVec values;
  std::vector<std::vector<std::size_t>> clusters;  // sorted by representative (real, then imaginary part)
  std::vector<cplx> representatives;               // cluster means
  double cluster_tol = 0.0;
  bool hermitian = false;

  std::size_t cluster_count() const { return clusters.size(); }
  std::size_t multiplicity(std::size_t cluster) const { return clusters.at(cluster).size(); }
};

inline double default_cluster_tol(const CVec& values) {
  const double scale = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  return 1e-8 * std::max(1.0, scale);
}

/// Groups values so that members of one cluster are pairwise within `tol`.
inline Spectrum cluster_values(const CVec& values, double tol, bool hermitian) {
  Spectrum s;
  s.values = values;
  s.cluster_tol = tol;
  s.hermitian = hermitian;

  std::vector<std::size_t> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto lex_less = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(values[static_cast<Index>(a)], values[static_cast<Index>(b)]);
  });

  for (std::size_t idx : order) {
    const cplx v = values[static_cast<Index>(idx)];
    auto fits = [&](const std::vector<std::size_t>& cluster) {
      return std::all_of(cluster.begin(), cluster.end(),
                         [&](std::size_t j) { return std::abs(values[static_cast<Index>(j)] - v) <= tol; });
    };
    auto it = std::find_if(s.clusters.begin(), s.clusters.end(), fits);
    if (it == s.clusters.end()) s.clusters.push_back({idx});
    else it->push_back(idx);
  }

  for (const auto& cluster : s.clusters) {
    cplx sum = 0.0;
    for (std::size_t j : cluster) sum += values[static_cast<Index>(j)];
    s.representatives.push_back(sum / static_cast<double>(cluster.size()));
  }

  std::vector<std::size_t> perm(s.clusters.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(s.representatives[a], s.representatives[b]); });
  Spectrum sorted = s;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    sorted.clusters[k] = s.clusters[perm[k]];
    sorted.representatives[k] = s.representatives[perm[k]];
  }
  return sorted;
}

/// The spectrum of phi in the convolution algebra: the eigenvalues of its Choi matrix.
inline Spectrum spectrum(const SuperOp& phi, std::optional<double> cluster_tol = std::nullopt) {
  const CMat rho = to_choi(phi);
  CVec values;
  const bool hermitian = is_hermitian(rho);
  if (hermitian) values = eig_hermitian(rho).values.cast<cplx>();
  else values = eig_general(rho);
  return cluster_values(values, cluster_tol.value_or(default_cluster_tol(values)), hermitian);
}

/// Trace in the convolution algebra: the sum of the spectrum, i.e. trace of the Choi matrix.
inline cplx trace_conv(const SuperOp& phi) {
  const Index n = phi.in_dim(), m = phi.out_dim();
  cplx t = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index p = 0; p < m; ++p) t += phi.aform()(p * m + p, i * n + i);
  return t;
}

/// Hilbert-Schmidt trace sum_ij <e_ij, phi(e_ij)>, the trace of the A-form.
inline cplx trace_hs(const SuperOp& phi) {
  if (phi.in_dim() != phi.out_dim())
    throw DimMismatch("trace_hs: requires equal input and output dimensions");
  return phi.aform().trace();
}

/// Partial transpose over the input factor of the Choi matrix:
/// phi^T(e_ij) = sum_kl a_jikl e_kl.
inline SuperOp pt_input(const SuperOp& phi) {
  const Index n = phi.in_dim(), m = phi.out_dim();
  return from_choi(partial_transpose(to_choi(phi), {n, m}, {0}), n, m);
}

namespace detail {

inline SuperOp lagrange_product(const SuperOp& phi, const Spectrum& spec, std::size_t target) {
  const SuperOp unit_elem = identity_element(phi.in_dim(), phi.out_dim());
  const cplx lambda_i = spec.representatives[target];
  SuperOp result = unit_elem;
  for (std::size_t j = 0; j < spec.cluster_count(); ++j) {
    if (j == target) continue;
    const cplx lambda_j = spec.representatives[j];
    const cplx gap = lambda_i - lambda_j;
    if (std::abs(gap) <= spec.cluster_tol)
      throw DegenerateDenominator("lagrange_projection: clusters " + std::to_string(target) + " and " +
                                  std::to_string(j) + " coincide within the cluster tolerance");
    result = convolve(result, (phi - lambda_j * unit_elem) * (1.0 / gap));
  }
  return result;
}

}  // namespace detail

/// Projection-like element for one spectral cluster:
/// prod_{j != i} (phi - lambda_j phi_e) / (lambda_i - lambda_j), with the product
/// taken under convolution and j running over distinct clusters.
///
/// Throws NotDiagonalizable when the Choi matrix is not Hermitian and some
/// cluster element fails to be idempotent.
inline SuperOp lagrange_projection(const SuperOp& phi, const Spectrum& spec, std::size_t target) {
  if (target >= spec.cluster_count())
    throw std::out_of_range("lagrange_projection: cluster index " + std::to_string(target) + " out of range");
  if (spec.cluster_count() == 1) return identity_element(phi.in_dim(), phi.out_dim());

  if (!spec.hermitian) {
    // The Lagrange elements always sum to phi_e; only idempotence detects a
    // nilpotent part.
    std::optional<SuperOp> wanted;
    for (std::size_t k = 0; k < spec.cluster_count(); ++k) {
      SuperOp pk = detail::lagrange_product(phi, spec, k);
      const double scale = std::max(1.0, pk.aform().squaredNorm());
      if (distance(convolve(pk, pk), pk) > 1e-8 * scale)
        throw NotDiagonalizable("lagrange_projection: Choi matrix is not diagonalizable");
      if (k == target) wanted = std::move(pk);
    }
    return *wanted;
  }
  return detail::lagrange_product(phi, spec, target);
}

inline SuperOp lagrange_projection(const SuperOp& phi, std::size_t target,
                                   std::optional<double> cluster_tol = std::nullopt) {
  return lagrange_projection(phi, spectrum(phi, cluster_tol), target);
}

}  // namespace convalg
