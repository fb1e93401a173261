#pragma once

// Seeded random matrices used by the samplers and the test suites.

#include <cstdint>
#include <random>

#include "convalg/linalg.hpp"

namespace convalg {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. standard complex Gaussian entries.
inline CMat ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat g(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx(re, im) / std::sqrt(2.0);
    }
  return g;
}

/// Haar-distributed isometry (rows >= cols) from the phase-corrected QR of a Ginibre matrix.
inline CMat random_isometry(Index rows, Index cols, Rng& rng) {
  if (rows < cols) throw ShapeMismatch("random_isometry: needs rows >= cols");
  const Eigen::MatrixXcd g = ginibre(rows, rows, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Index k = 0; k < rows; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q.leftCols(cols);
}

inline CMat random_unitary(Index n, Rng& rng) { return random_isometry(n, n, rng); }

inline CMat random_hermitian(Index n, Rng& rng) {
  const CMat g = ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

/// Random probability vector (uniform on the simplex).
inline std::vector<double> random_simplex(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(k);
  double total = 0.0;
  for (auto& x : p) total += (x = expo(rng));
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace convalg
