#pragma once

// Dense complex-matrix kernel: Kronecker products, partial trace and
// partial transpose over tensor factors, Hermitian and general eigensolvers.
//
// Matrices are row-major. A composite index over factors (i_1, ..., i_k) is
// big-endian: i_1 varies slowest.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "convalg/errors.hpp"

namespace convalg {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Dimensions of the tensor factors making up one side of a square matrix.
class FactorShape {
 public:
  FactorShape() = default;
  FactorShape(std::initializer_list<Index> dims) : dims_(dims) { validate(); }
  explicit FactorShape(std::vector<Index> dims) : dims_(std::move(dims)) { validate(); }

  const std::vector<Index>& dims() const { return dims_; }
  std::size_t count() const { return dims_.size(); }
  Index operator[](std::size_t k) const { return dims_[k]; }

  Index size() const {
    return std::accumulate(dims_.begin(), dims_.end(), Index{1}, std::multiplies<>());
  }

  /// Splits a composite index into per-factor digits.
  void digits(Index composite, std::vector<Index>& out) const {
    out.resize(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
      out[k] = composite % dims_[k];
      composite /= dims_[k];
    }
  }

  Index compose(const std::vector<Index>& digits) const {
    Index c = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) c = c * dims_[k] + digits[k];
    return c;
  }

 private:
  void validate() const {
    for (Index d : dims_)
      if (d <= 0) throw ShapeMismatch("factor dimensions must be positive");
  }

  std::vector<Index> dims_;
};

inline double max_abs(const CMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Entrywise l_p norm of a matrix (p = 2 is the Frobenius norm).
inline double entrywise_norm(const CMat& a, int p) {
  if (p == 1) return a.cwiseAbs().sum();
  if (p == 2) return a.norm();
  throw UnsupportedP("entrywise norm supports p = 1 or p = 2, got " + std::to_string(p));
}

inline bool all_finite(const CMat& a) {
  return std::all_of(a.data(), a.data() + a.size(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

/// Scale-relative tolerance used to decide Hermiticity.
inline double hermiticity_tol(const CMat& a) { return 1e-10 * std::max(1.0, max_abs(a)); }

inline bool is_hermitian(const CMat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

inline bool is_hermitian(const CMat& a) { return is_hermitian(a, hermiticity_tol(a)); }

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Matrix unit e_ij of size rows x cols.
inline CMat unit(Index rows, Index cols, Index i, Index j) {
  CMat e = CMat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

inline CMat unit(Index n, Index i, Index j) { return unit(n, n, i, j); }

struct HermitianEigen {
  RVec values;   // ascending
  CMat vectors;  // columns, orthonormal
};

inline void require_square(const CMat& a, const char* what) {
  if (a.rows() != a.cols())
    throw NotSquare(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
}

inline HermitianEigen eig_hermitian(const CMat& a) {
  require_square(a, "eig_hermitian");
  const double deviation = max_abs(a - a.adjoint());
  if (deviation > hermiticity_tol(a))
    throw NotHermitian("eig_hermitian: max |A - A^dagger| = " + std::to_string(deviation));
  if (a.rows() == 0) return {};
  Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) throw NoConvergence("eig_hermitian: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues of a general square matrix, in no particular order.
inline CVec eig_general(const CMat& a) {
  require_square(a, "eig_general");
  if (a.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(a), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NoConvergence("eig_general: QR iteration cap exceeded");
  return solver.eigenvalues();
}

namespace detail {

inline void check_shape(const CMat& a, const FactorShape& shape, const char* what) {
  if (a.rows() != a.cols() || a.rows() != shape.size())
    throw ShapeMismatch(std::string(what) + ": factor shape of size " + std::to_string(shape.size()) +
                        " does not match a " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " matrix");
}

inline std::vector<bool> factor_mask(const FactorShape& shape, const std::vector<std::size_t>& which,
                                     const char* what) {
  std::vector<bool> mask(shape.count(), false);
  for (std::size_t k : which) {
    if (k >= shape.count())
      throw ShapeMismatch(std::string(what) + ": factor index " + std::to_string(k) + " out of range");
    mask[k] = true;
  }
  return mask;
}

}  // namespace detail

/// Traces out every factor not listed in `keep`.
inline CMat partial_trace(const CMat& a, const FactorShape& shape, const std::vector<std::size_t>& keep) {
  detail::check_shape(a, shape, "partial_trace");
  const auto kept = detail::factor_mask(shape, keep, "partial_trace");

  std::vector<Index> kept_dims;
  for (std::size_t k = 0; k < shape.count(); ++k)
    if (kept[k]) kept_dims.push_back(shape[k]);
  const FactorShape out_shape(kept_dims);

  CMat out = CMat::Zero(out_shape.size(), out_shape.size());
  std::vector<Index> rd, cd, rk, ck;
  for (Index r = 0; r < a.rows(); ++r) {
    shape.digits(r, rd);
    for (Index c = 0; c < a.cols(); ++c) {
      shape.digits(c, cd);
      bool diagonal_in_traced = true;
      rk.clear();
      ck.clear();
      for (std::size_t k = 0; k < shape.count(); ++k) {
        if (kept[k]) {
          rk.push_back(rd[k]);
          ck.push_back(cd[k]);
        } else if (rd[k] != cd[k]) {
          diagonal_in_traced = false;
          break;
        }
      }
      if (diagonal_in_traced) out(out_shape.compose(rk), out_shape.compose(ck)) += a(r, c);
    }
  }
  return out;
}

/// Transposes the row/column indices of the factors listed in `flip`.
inline CMat partial_transpose(const CMat& a, const FactorShape& shape, const std::vector<std::size_t>& flip) {
  detail::check_shape(a, shape, "partial_transpose");
  const auto flipped = detail::factor_mask(shape, flip, "partial_transpose");

  CMat out(a.rows(), a.cols());
  std::vector<Index> rd, cd;
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      shape.digits(r, rd);
      shape.digits(c, cd);
      for (std::size_t k = 0; k < shape.count(); ++k)
        if (flipped[k]) std::swap(rd[k], cd[k]);
      out(shape.compose(rd), shape.compose(cd)) = a(r, c);
    }
  }
  return out;
}

/// Inverse square root of a Hermitian positive-definite matrix.
inline CMat inverse_sqrt_psd(const CMat& a) {
  const auto eig = eig_hermitian(a);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0.0)
    throw Error("inverse_sqrt_psd: matrix is not positive definite");
  RVec inv_sqrt = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * inv_sqrt.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

}  // namespace convalg
