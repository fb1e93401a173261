#include <gtest/gtest.h>

#include "convalg/channels.hpp"
#include "oracles.hpp"

using namespace convalg;

namespace {

CMat pauli_x() {
  CMat x = CMat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

CMat hadamard() {
  CMat h = CMat::Ones(2, 2);
  h(1, 1) = -1.0;
  return h / std::sqrt(2.0);
}

SuperOp dephasing() { return from_kraus(KrausSet({unit(2, 0, 0), unit(2, 1, 1)})); }

double min_eigenvalue(const CMat& h) { return eig_hermitian(h).values.minCoeff(); }

}  // namespace

TEST(from_kraus, examples) {
  EXPECT_EQ(from_kraus(KrausSet({CMat(CMat::Identity(2, 2))})).aform(), identity_channel(2).aform());

  CMat choi_x = CMat::Zero(4, 4);
  choi_x(1, 1) = choi_x(1, 2) = choi_x(2, 1) = choi_x(2, 2) = 1.0;
  EXPECT_EQ(to_choi(from_kraus(KrausSet({pauli_x()}))), choi_x);

  CMat choi_d = CMat::Zero(4, 4);
  choi_d(0, 0) = choi_d(3, 3) = 1.0;
  EXPECT_EQ(to_choi(dephasing()), choi_d);
}

TEST(from_kraus, applies_operator_sum) {
  Rng rng(1);
  const KrausSet ks = random_channel(2, 3, 3, rng);
  const SuperOp phi = from_kraus(ks);
  const CMat x = ginibre(2, 2, rng);
  CMat expected = CMat::Zero(3, 3);
  for (const auto& k : ks.ops()) expected += k * x * k.adjoint();
  EXPECT_LE(max_abs(convalg::apply(phi, x) - expected), 1e-13);
  EXPECT_GE(min_eigenvalue(to_choi(phi)), -1e-12);
}

TEST(kraus_set, validation) {
  EXPECT_THROW(KrausSet(2, 2, {}), ShapeMismatch);
  EXPECT_THROW(KrausSet({CMat(CMat::Zero(2, 2)), CMat(CMat::Zero(3, 2))}), ShapeMismatch);
  Rng rng(2);
  EXPECT_TRUE(random_channel(3, 2, 4, rng).is_trace_preserving());
  EXPECT_THROW(random_channel(3, 2, 1, rng), ShapeMismatch);
  EXPECT_FALSE(KrausSet({CMat(2.0 * CMat::Identity(2, 2))}).is_trace_preserving());
}

TEST(minimal_kraus, examples) {
  const KrausSet id = minimal_kraus(identity_channel(2));
  ASSERT_EQ(id.size(), 1u);
  // Equal to I up to a global phase.
  const cplx phase = id[0](0, 0);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LE(max_abs(id[0] - phase * CMat::Identity(2, 2)), 1e-12);

  const KrausSet e = minimal_kraus(identity_element(2, 2));
  EXPECT_EQ(e.size(), 4u);
  EXPECT_LE(distance(from_kraus(e), identity_element(2, 2)), 1e-12);

  const KrausSet d = minimal_kraus(dephasing());
  EXPECT_EQ(d.size(), 2u);
  EXPECT_LE(distance(from_kraus(d), dephasing()), 1e-12);
}

TEST(minimal_kraus, round_trip_and_orthogonality) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 2, m = 2 + (t / 2) % 2;
    const std::size_t k = 2 + static_cast<std::size_t>(t % 4);
    const SuperOp phi = from_kraus(random_channel(n, m, k, rng));
    const KrausSet ks = minimal_kraus(phi);
    EXPECT_LE(ks.size(), std::min<std::size_t>(k, static_cast<std::size_t>(n * m)));
    EXPECT_LE(distance(from_kraus(ks), phi), 1e-9);
    const auto eig = eig_hermitian(to_choi(phi));
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const cplx g = (ks[i].adjoint() * ks[j]).trace();
        const double expected = i == j ? eig.values[eig.values.size() - 1 - static_cast<Index>(i)] : 0.0;
        EXPECT_LE(std::abs(g - expected), 1e-10);
      }
  }
}

TEST(minimal_kraus, rejects_non_cp) {
  EXPECT_THROW(minimal_kraus(transposition_map(2)), NotCP);
  Rng rng(4);
  EXPECT_THROW(minimal_kraus(SuperOp(2, 2, ginibre(4, 4, rng))), NotCP);
}

TEST(kraus, unitary_mixing_leaves_channel_unchanged) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const KrausSet ks = random_channel(3, 3, 4, rng);
    const CMat u = random_unitary(4, rng);
    std::vector<CMat> mixed;
    for (Index i = 0; i < 4; ++i) {
      CMat k = CMat::Zero(3, 3);
      for (Index j = 0; j < 4; ++j) k += u(i, j) * ks[static_cast<std::size_t>(j)];
      mixed.push_back(k);
    }
    EXPECT_LE(distance(from_kraus(KrausSet(mixed)), from_kraus(ks)), 1e-10);
  }
}

TEST(channel_checks, examples) {
  auto r = channel_checks(identity_channel(2));
  EXPECT_TRUE(r.is_cp && r.is_tp && r.is_unital && r.is_unitary);
  EXPECT_EQ(r.kraus_rank, 1);

  r = channel_checks(transposition_map(2));
  EXPECT_FALSE(r.is_cp);
  EXPECT_NEAR(r.min_choi_eigenvalue, -1.0, 1e-12);
  EXPECT_TRUE(r.is_tp);
  EXPECT_TRUE(r.is_unital);
  EXPECT_FALSE(r.is_unitary);

  // phi_e scales traces by 2; half of it is the completely depolarising channel.
  r = channel_checks(identity_element(2, 2));
  EXPECT_TRUE(r.is_cp);
  EXPECT_FALSE(r.is_tp);
  EXPECT_FALSE(r.is_unital);
  EXPECT_EQ(r.kraus_rank, 4);

  r = channel_checks(0.5 * identity_element(2, 2));
  EXPECT_TRUE(r.is_cp);
  EXPECT_TRUE(r.is_tp);
  EXPECT_TRUE(r.is_unital);
  EXPECT_FALSE(r.is_unitary);
  EXPECT_EQ(r.kraus_rank, 4);
}

TEST(channel_checks, amplitude_damping_is_not_unital) {
  const auto r = channel_checks(from_kraus(amplitude_damping(0.3)));
  EXPECT_TRUE(r.is_cp);
  EXPECT_TRUE(r.is_tp);
  EXPECT_FALSE(r.is_unital);
  EXPECT_EQ(r.kraus_rank, 2);
}

TEST(channel_checks, non_hermitian_choi) {
  Rng rng(6);
  const auto r = channel_checks(SuperOp(2, 2, ginibre(4, 4, rng)));
  EXPECT_FALSE(r.is_cp);
  EXPECT_FALSE(r.is_unitary);
}

TEST(unitary_channel, examples) {
  EXPECT_EQ(unitary_channel(CMat::Identity(2, 2)).aform(), identity_channel(2).aform());
  const SuperOp x = unitary_channel(pauli_x());
  EXPECT_LE(distance(convolve(x, x), 2.0 * x), 1e-14);

  const SuperOp h = unitary_channel(hadamard());
  const auto r = channel_checks(h);
  EXPECT_EQ(r.kraus_rank, 1);
  EXPECT_NEAR(trace_conv(h).real(), 2.0, 1e-14);
  EXPECT_TRUE(r.is_unitary);

  EXPECT_THROW(unitary_channel(2.0 * pauli_x()), NotUnitary);
  EXPECT_THROW(unitary_channel(CMat::Zero(2, 3)), NotUnitary);
}

TEST(unitary_channel, characterization_both_directions) {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const Index n = 2 + t % 3;
    const SuperOp u = unitary_channel(random_unitary(n, rng));
    EXPECT_LE(distance(convolve(u, u), static_cast<double>(n) * u), 1e-9);
    EXPECT_TRUE(channel_checks(u).is_unitary);
  }
  // Converse: any CPTP map satisfying phi * phi = n phi has a rank-one, idempotent normalised Choi matrix.
  for (int t = 0; t < 30; ++t) {
    const Index n = 2 + t % 2;
    const SuperOp phi = from_kraus(random_channel(n, n, 1 + static_cast<std::size_t>(t % 3), rng));
    if (distance(convolve(phi, phi), static_cast<double>(n) * phi) > 1e-8) continue;
    const CMat state = to_choi(phi) / static_cast<double>(n);
    EXPECT_LE(max_abs(state * state - state), 1e-8);
    EXPECT_EQ(channel_checks(phi).kraus_rank, 1);
  }
}

TEST(transposition_map, examples) {
  EXPECT_EQ(convalg::apply(transposition_map(2), unit(2, 0, 1)), unit(2, 1, 0));
  Rng rng(8);
  const CMat x = ginibre(3, 3, rng);
  EXPECT_EQ(convalg::apply(transposition_map(3), x), CMat(x.transpose()));
}

TEST(schur_map, examples) {
  EXPECT_EQ(schur_map(CMat::Ones(3, 3)).aform(), identity_channel(3).aform());
  const SuperOp si = schur_map(CMat::Identity(2, 2));
  EXPECT_EQ(convolve(si, si).aform(), si.aform());
  EXPECT_THROW(schur_map(CMat::Ones(2, 3)), NotSquare);

  Rng rng(9);
  const CMat a = ginibre(3, 3, rng), x = ginibre(3, 3, rng);
  EXPECT_EQ(convalg::apply(schur_map(a), x), CMat(a.cwiseProduct(x)));
}

TEST(schur_map, convolution_is_matrix_product) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + t % 3;
    const CMat a = ginibre(n, n, rng), b = ginibre(n, n, rng);
    EXPECT_LE(distance(convolve(schur_map(a), schur_map(b)), schur_map(a * b)), 1e-10);
  }
}

TEST(complementary_channel, unitary_gives_trace) {
  Rng rng(11);
  const KrausSet ks({random_unitary(3, rng)});
  const SuperOp c = complementary_channel(ks);
  EXPECT_EQ(c.in_dim(), 3);
  EXPECT_EQ(c.out_dim(), 1);
  const CMat x = ginibre(3, 3, rng);
  EXPECT_LE(std::abs(convalg::apply(c, x)(0, 0) - x.trace()), 1e-12);
  EXPECT_LE(distance(convolve(c, c), c), 1e-12);
}

TEST(complementary_channel, matches_displayed_formula) {
  Rng rng(12);
  const KrausSet ks = random_channel(2, 3, 3, rng);
  const SuperOp c = complementary_channel(ks);
  const CMat x = ginibre(2, 2, rng);
  const CMat out = convalg::apply(c, x);
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      EXPECT_LE(std::abs(out(static_cast<Index>(p), static_cast<Index>(q)) - (ks[q].adjoint() * ks[p] * x).trace()),
                1e-13);
}

TEST(complementary_channel, idempotent_iff_unital) {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const Index n = 2 + t % 2;
    const KrausSet unital = random_unital_channel(n, 2 + static_cast<std::size_t>(t % 3), rng);
    const SuperOp c = complementary_channel(unital);
    EXPECT_LE(distance(convolve(c, c), c), 1e-8);

    const KrausSet general = random_channel(n, n, 2 + static_cast<std::size_t>(t % 3), rng);
    ASSERT_FALSE(channel_checks(from_kraus(general)).is_unital);
    const SuperOp g = complementary_channel(general);
    EXPECT_GT(distance(convolve(g, g), g), 1e-4);
  }
  const SuperOp ad = complementary_channel(amplitude_damping(0.4));
  EXPECT_GT(distance(convolve(ad, ad), ad), 1e-3);
}

TEST(convolve_kraus, examples) {
  const KrausSet id({CMat(CMat::Identity(2, 2))});
  EXPECT_LE(distance(convolve_kraus(id, id), 2.0 * identity_channel(2)), 1e-15);
  EXPECT_THROW(convolve_kraus(id, KrausSet({CMat(CMat::Identity(3, 3))})), ShapeMismatch);
}

TEST(convolve_kraus, agrees_with_aform_convolution) {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    const Index n = 2 + t % 2;
    const KrausSet a = random_channel(n, n, 1 + static_cast<std::size_t>(t % 4), rng);
    const KrausSet b = random_channel(n, n, 1 + static_cast<std::size_t>((t / 4) % 4), rng);
    EXPECT_LE(distance(convolve_kraus(a, b), convolve(from_kraus(a), from_kraus(b))), 1e-9);
  }
}

TEST(convolve_kraus, self_convolution_of_orthogonal_set_is_cp) {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const KrausSet ks = minimal_kraus(from_kraus(random_channel(3, 3, 3, rng)));
    const SuperOp c = convolve_kraus(ks, ks);
    // Orthogonality collapses the double sum to sum_p tr(M_p^dagger M_p) M_p x M_p^dagger.
    CMat aform = CMat::Zero(9, 9);
    for (const auto& mp : ks.ops()) aform += (mp.adjoint() * mp).trace() * kron(mp, mp.conjugate());
    EXPECT_LE(distance(c, SuperOp(3, 3, aform)), 1e-10);
    EXPECT_TRUE(channel_checks(c).is_cp);
  }
}

TEST(convolve_kraus, distinct_channels_leave_hermitian_choi) {
  // Choi(a * b) = Choi(a) Choi(b) is a product of two PSD matrices: its
  // eigenvalues are real and non-negative, but it is generally not Hermitian,
  // so the result is not CP.
  Rng rng(16);
  int non_cp = 0;
  for (int t = 0; t < 50; ++t) {
    const KrausSet a = random_channel(2, 2, 2, rng), b = random_channel(2, 2, 2, rng);
    const SuperOp c = convolve_kraus(a, b);
    const CMat choi = to_choi(c);
    const CVec ev = eig_general(choi);
    for (Index k = 0; k < ev.size(); ++k) {
      EXPECT_LE(std::abs(ev[k].imag()), 1e-8);
      EXPECT_GE(ev[k].real(), -1e-8);
    }
    if (!channel_checks(c).is_cp) ++non_cp;
  }
  EXPECT_GT(non_cp, 0);
}
