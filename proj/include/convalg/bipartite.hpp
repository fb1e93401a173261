#pragma once

// Bipartite operations B(H1A (x) H1B) -> B(H2A (x) H2B) and nonseparability
// witnesses built inside the convolution algebra.
//
// The Choi matrix of a bipartite map lives on H1A (x) H1B (x) H2A (x) H2B, in
// that factor order, with big-endian flattening. Its entry at row (i, j, k, l),
// column (p, q, r, s) is the coefficient of e_kr (x) e_ls in phi(e_ip (x) e_jq).

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "convalg/channels.hpp"
#include "convalg/errors.hpp"
#include "convalg/linalg.hpp"
#include "convalg/random.hpp"
#include "convalg/superop.hpp"

namespace convalg {

struct BipartiteShape {
  Index in_a = 1;
  Index in_b = 1;
  Index out_a = 1;
  Index out_b = 1;

  Index in_dim() const { return in_a * in_b; }
  Index out_dim() const { return out_a * out_b; }
  FactorShape choi_factors() const { return {in_a, in_b, out_a, out_b}; }

  friend bool operator==(const BipartiteShape&, const BipartiteShape&) = default;
};

class BipartiteOp {
 public:
  BipartiteOp(BipartiteShape shape, SuperOp op) : shape_(shape), op_(std::move(op)) {
    if (shape_.in_a <= 0 || shape_.in_b <= 0 || shape_.out_a <= 0 || shape_.out_b <= 0)
      throw ShapeMismatch("BipartiteOp: local dimensions must be positive");
    if (op_.in_dim() != shape_.in_dim() || op_.out_dim() != shape_.out_dim())
      throw ShapeMismatch("BipartiteOp: map " + std::to_string(op_.in_dim()) + "->" +
                          std::to_string(op_.out_dim()) + " does not match local dimensions");
  }

  const BipartiteShape& shape() const { return shape_; }
  const SuperOp& op() const { return op_; }

 private:
  BipartiteShape shape_;
  SuperOp op_;
};

/// Partial transpose of the Choi matrix over the A-side factors (H1A and H2A).
inline BipartiteOp pt_a(const BipartiteOp& bop) {
  const auto& s = bop.shape();
  const CMat choi = partial_transpose(to_choi(bop.op()), s.choi_factors(), {0, 2});
  return {s, from_choi(choi, s.in_dim(), s.out_dim())};
}

/// Product map a (x) b, acting as x (x) y -> a(x) (x) b(y).
inline BipartiteOp tensor_op(const SuperOp& a, const SuperOp& b) {
  const BipartiteShape s{a.in_dim(), b.in_dim(), a.out_dim(), b.out_dim()};
  const Index n = s.in_dim();
  CMat aform(s.out_dim() * s.out_dim(), n * n);
  for (Index ia = 0; ia < s.in_a; ++ia)
    for (Index ja = 0; ja < s.in_a; ++ja) {
      const CMat out_a = convalg::apply(a, unit(s.in_a, ia, ja));
      for (Index ib = 0; ib < s.in_b; ++ib)
        for (Index jb = 0; jb < s.in_b; ++jb) {
          const CMat out = kron(out_a, convalg::apply(b, unit(s.in_b, ib, jb)));
          const Index col = (ia * s.in_b + ib) * n + (ja * s.in_b + jb);
          aform.col(col) = Eigen::Map<const CVec>(out.data(), out.size());
        }
    }
  return {s, SuperOp(n, s.out_dim(), std::move(aform))};
}

/// Seeded random separable channel: sum_i p_i (V_i^A (x) V_i^B) x (V_i^A (x) V_i^B)^dagger
/// with Haar local isometries (unitaries when local dimensions agree).
inline BipartiteOp random_separable_channel(const BipartiteShape& shape, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw ShapeMismatch("random_separable_channel: need at least one term");
  if (shape.out_a < shape.in_a || shape.out_b < shape.in_b)
    throw ShapeMismatch("random_separable_channel: local isometries need output dims >= input dims");
  Rng rng(seed);
  const auto weights = random_simplex(k, rng);
  std::vector<CMat> ops;
  for (double w : weights) {
    const CMat va = random_isometry(shape.out_a, shape.in_a, rng);
    const CMat vb = random_isometry(shape.out_b, shape.in_b, rng);
    ops.push_back(std::sqrt(w) * kron(va, vb));
  }
  return {shape, from_kraus(KrausSet(shape.in_dim(), shape.out_dim(), std::move(ops)))};
}

/// Which spectral cluster of the partially transposed map to build a witness from.
struct EigenSelector {
  enum class Kind { MostNegative, ClusterIndex };
  Kind kind = Kind::MostNegative;
  std::size_t index = 0;

  static EigenSelector most_negative() { return {}; }
  static EigenSelector cluster(std::size_t k) { return {Kind::ClusterIndex, k}; }

  /// Accepts "most-negative" or "index:k".
  static EigenSelector parse(std::string_view text) {
    if (text == "most-negative") return most_negative();
    constexpr std::string_view prefix = "index:";
    if (text.substr(0, prefix.size()) == prefix) {
      const auto digits = text.substr(prefix.size());
      std::size_t k = 0;
      const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec == std::errc() && end == digits.data() + digits.size() && !digits.empty()) return cluster(k);
    }
    throw ParseError("eigenvalue selector must be 'most-negative' or 'index:k', got '" + std::string(text) + "'");
  }
};

enum class Verdict { NonseparableDetected, Inconclusive };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::NonseparableDetected ? "nonseparable_detected" : "inconclusive";
}

struct WitnessReport {
  double chosen_eigenvalue = 0.0;
  std::size_t multiplicity = 0;
  BipartiteOp witness;
  double detection_value = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Tr(W * phi), real part.
inline double detection_value(const BipartiteOp& witness, const BipartiteOp& target) {
  if (!(witness.shape() == target.shape()))
    throw ShapeMismatch("detection_value: witness and target have different local dimensions");
  return trace_conv(convolve(witness.op(), target.op())).real();
}

inline double report_tol(const BipartiteOp& bop) {
  return 1e-9 * std::max(1.0, std::abs(trace_conv(bop.op())));
}

/// Builds W = ((phi^{T_A})_{P_i})^{T_A} for the selected cluster i of the spectrum
/// of phi^{T_A} and evaluates Tr(W * phi). A negative value certifies that phi is
/// not separable.
inline WitnessReport build_witness(const BipartiteOp& bop, EigenSelector which = EigenSelector::most_negative(),
                                   std::optional<double> cluster_tol = std::nullopt) {
  const BipartiteOp transposed = pt_a(bop);
  if (!is_hermitian(to_choi(transposed.op())))
    throw NonHermitianChoi("build_witness: partially transposed Choi matrix is not Hermitian");

  const Spectrum spec = spectrum(transposed.op(), cluster_tol);
  auto is_real = [&](std::size_t k) { return std::abs(spec.representatives[k].imag()) <= spec.cluster_tol; };

  std::optional<std::size_t> chosen;
  if (which.kind == EigenSelector::Kind::MostNegative) {
    for (std::size_t k = 0; k < spec.cluster_count() && !chosen; ++k)
      if (is_real(k)) chosen = k;
  } else {
    if (which.index >= spec.cluster_count())
      throw NoRealEigenvalue("build_witness: cluster index " + std::to_string(which.index) + " out of range (" +
                             std::to_string(spec.cluster_count()) + " clusters)");
    if (is_real(which.index)) chosen = which.index;
  }
  if (!chosen) throw NoRealEigenvalue("build_witness: selected eigenvalue is not real");

  const SuperOp projection = lagrange_projection(transposed.op(), spec, *chosen);
  BipartiteOp witness = pt_a(BipartiteOp(bop.shape(), projection));
  const double value = detection_value(witness, bop);
  const Verdict verdict = value < -report_tol(bop) ? Verdict::NonseparableDetected : Verdict::Inconclusive;
  return {spec.representatives[*chosen].real(), spec.multiplicity(*chosen), std::move(witness), value, verdict};
}

/// Nonzero coefficients a_{ijklpqrs} of the controlled-NOT channel (control on A),
/// written as the digit string "ijklpqrs"; each coefficient is 1.
inline constexpr std::array<std::string_view, 16> kCnotCoefficients = {
    "00000000", "00000101", "00001011", "00001110",  //
    "01010000", "01010101", "01011011", "01011110",  //
    "10110000", "10110101", "10111011", "10111110",  //
    "11100000", "11100101", "11101011", "11101110",
};

/// Nonzero coefficients of the A-side partial transpose of the controlled-NOT channel.
inline constexpr std::array<std::string_view, 16> kCnotTransposedCoefficients = {
    "00000000", "00000101", "10100001", "10100100",  //
    "01010000", "01010101", "11110001", "11110100",  //
    "00011010", "00011111", "10111011", "10111110",  //
    "01001010", "01001111", "11101011", "11101110",
};

/// Builds a two-qubit bipartite map from a table of unit coefficients a_{ijklpqrs}.
inline BipartiteOp qubit_map_from_coefficients(const std::array<std::string_view, 16>& table) {
  const BipartiteShape shape{2, 2, 2, 2};
  const FactorShape factors = shape.choi_factors();
  CMat choi = CMat::Zero(16, 16);
  for (std::string_view digits : table) {
    std::vector<Index> row, col;
    for (std::size_t k = 0; k < 4; ++k) {
      row.push_back(digits[k] - '0');
      col.push_back(digits[k + 4] - '0');
    }
    choi(factors.compose(row), factors.compose(col)) = 1.0;
  }
  return {shape, from_choi(choi, 4, 4)};
}

inline BipartiteOp cnot_channel() { return qubit_map_from_coefficients(kCnotCoefficients); }

inline CMat cnot_matrix() {
  CMat u = CMat::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

}  // namespace convalg
