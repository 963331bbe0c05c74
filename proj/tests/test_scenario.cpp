#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiw/scenario.hpp"
#include "support/test_support.hpp"

namespace qiw {
namespace {

TEST(BellStatePovm, CanonicalElements) {
  for (std::size_t d : {2u, 3u}) {
    const auto povm = bell_state_povm(d);
    const auto phi = max_entangled(d).projector();
    EXPECT_LT(max_abs_diff(povm[1], phi), 1e-15);
    EXPECT_LT(max_abs_diff(povm[0] + povm[1], ComplexMatrix::identity(d * d)), 1e-15);
    EXPECT_TRUE(is_psd(povm[0]));
  }
}

TEST(EffectivePovm, MaximallyEntangledGivesTransposedInputOverD) {
  std::mt19937_64 rng(4);
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto phi = max_entangled(d).projector();
    for (int trial = 0; trial < 5; ++trial) {
      const auto in = testing::random_pure(d, rng);
      const auto expected = in.projector().transpose() * (1.0 / static_cast<double>(d));
      EXPECT_LT(max_abs_diff(effective_povm(phi, in, Subsystem::A), expected), 1e-14);
      EXPECT_LT(max_abs_diff(effective_povm(phi, in, Subsystem::B), expected), 1e-14);
    }
  }
}

TEST(EffectivePovm, MatchesPartialTraceDefinition) {
  // (<phi| (x) 1) E (|phi> (x) 1) = tr_1[(|phi><phi| (x) 1) E]
  std::mt19937_64 rng(8);
  const std::size_t d = 3;
  const auto e = testing::random_hermitian(d * d, rng);
  const auto in = testing::random_pure(d, rng);
  const auto viaTrace =
      partial_trace(kron(in.projector(), ComplexMatrix::identity(d)) * e, d, d, Subsystem::B);
  EXPECT_LT(max_abs_diff(effective_povm(e, in, Subsystem::A), viaTrace), 1e-13);
  const auto viaTraceB =
      partial_trace(e * kron(ComplexMatrix::identity(d), in.projector()), d, d, Subsystem::A);
  EXPECT_LT(max_abs_diff(effective_povm(e, in, Subsystem::B), viaTraceB), 1e-13);
}

TEST(ProductExpectation, MatchesKron) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dA = 2 + trial % 2, dB = 2 + trial % 3;
    const auto x = testing::random_hermitian(dA, rng), y = testing::random_hermitian(dB, rng);
    const auto rho = testing::random_density(dA, dB, 2, rng);
    EXPECT_NEAR(product_expectation(x, y, rho.matrix()), trace_product(kron(x, y), rho.matrix()).real(), 1e-12);
  }
}

TEST(Correlations, SingletWithTetrahedronMatchesTable) {
  const auto sc = canonical_scenario(DensityMatrix::from_pure(singlet(), 2, 2), tetrahedron_ensemble(),
                                     tetrahedron_ensemble());
  const auto table = correlations(sc);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t t = 0; t < 4; ++t) {
          const double expected = s == t ? (2.0 - (a + b)) / 4.0 : (7.0 - 5 * a - 5 * b + 4 * a * b) / 12.0;
          EXPECT_NEAR(table(a, b, s, t), expected, 1e-12) << a << b << s << t;
        }
}

TEST(Correlations, SingletProbabilitiesOfBothOnes) {
  const auto sc = canonical_scenario(DensityMatrix::from_pure(singlet(), 2, 2), tetrahedron_ensemble(),
                                     tetrahedron_ensemble());
  const auto t = correlations(sc);
  EXPECT_NEAR(t(1, 1, 0, 0), 0.0, 1e-14);
  EXPECT_NEAR(t(1, 1, 0, 1), 1.0 / 12.0, 1e-14);
}

TEST(Correlations, MaximallyMixedFactorizes) {
  const auto sc = canonical_scenario(werner_state(2, 0.0), tetrahedron_ensemble(), tetrahedron_ensemble());
  const auto t = correlations(sc);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t u = 0; u < 4; ++u) EXPECT_NEAR(t(a, b, s, u), (3.0 - 2 * a) * (3.0 - 2 * b) / 16.0, 1e-14);
}

TEST(Correlations, EffectivePathAgreesWithFullTensor) {
  std::mt19937_64 rng(77);
  for (std::size_t d : {2u, 3u}) {
    const auto eA = sic_ensemble(d), eB = sic_ensemble(d);
    for (int trial = 0; trial < 3; ++trial) {
      const auto rho = testing::random_density(d, d, 1 + trial, rng);
      const auto sc = canonical_scenario(rho, eA, eB);
      const auto table = correlations(sc);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (std::size_t s = 0; s < eA.size(); ++s)
            for (std::size_t t = 0; t < eB.size(); ++t)
              EXPECT_NEAR(table(a, b, s, t), testing::full_tensor_correlation(sc, a, b, s, t), 1e-10);
    }
  }
}

TEST(Correlations, ClosedFormsAgreeAcrossVisibilities) {
  for (double v = 0.0; v <= 1.0 + 1e-12; v += 0.125) {
    const auto tq = correlations(canonical_scenario(werner_qubit(v), tetrahedron_ensemble(), tetrahedron_ensemble()));
    const auto model_q = ClosedFormModel::werner_qubit(v);
    for (std::size_t d : {2u, 3u}) {
      const auto eA = sic_ensemble(d);
      const auto td = correlations(canonical_scenario(werner_state(d, v), eA, eA));
      const auto model = ClosedFormModel::werner(d, v);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (std::size_t s = 0; s < eA.size(); ++s)
            for (std::size_t t = 0; t < eA.size(); ++t) {
              EXPECT_NEAR(td(a, b, s, t), closed_form_correlations(model, a, b, s, t), 1e-10)
                  << "d=" << d << " v=" << v;
              if (d == 2)
                EXPECT_NEAR(tq(a, b, s, t), closed_form_correlations(model_q, a, b, s, t), 1e-10) << "v=" << v;
            }
    }
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      EXPECT_NEAR(closed_form_correlations(ClosedFormModel::singlet(), a, b, 1, 2),
                  closed_form_correlations(ClosedFormModel::werner_qubit(1.0), a, b, 1, 2), 1e-15);
}

TEST(Correlations, NormalizedNonNegativeAndNoSignalling) {
  std::mt19937_64 rng(3);
  const auto eA = sic_ensemble(3), eB = sic_ensemble(3);
  const auto t = correlations(canonical_scenario(testing::random_density(3, 3, 3, rng), eA, eB));
  EXPECT_LE(t.normalization_defect(), 1e-12);
  EXPECT_GE(t.min_entry(), -1e-12);
  // Alice's marginal does not depend on Bob's input and vice versa.
  for (int a = 0; a < 2; ++a)
    for (std::size_t s = 0; s < 9; ++s) {
      const double m0 = t(a, 0, s, 0) + t(a, 1, s, 0);
      for (std::size_t u = 1; u < 9; ++u) EXPECT_NEAR(t(a, 0, s, u) + t(a, 1, s, u), m0, 1e-12);
    }
  for (int b = 0; b < 2; ++b)
    for (std::size_t u = 0; u < 9; ++u) {
      const double m0 = t(0, b, 0, u) + t(1, b, 0, u);
      for (std::size_t s = 1; s < 9; ++s) EXPECT_NEAR(t(0, b, s, u) + t(1, b, s, u), m0, 1e-12);
    }
}

TEST(Correlations, SerialAndParallelAreIdentical) {
  const auto sc = canonical_scenario(werner_state(4, 0.6), sic_ensemble(4), sic_ensemble(4));
  EXPECT_EQ(correlations(sc), serial::correlations(sc));
}

TEST(QIScenario, Validation) {
  const auto rho = werner_state(2, 0.5);
  const auto tet = tetrahedron_ensemble();
  EXPECT_THROW(QIScenario(rho, sic_ensemble(3), tet, bell_state_povm(2), bell_state_povm(2)), DimensionError);
  auto bad = bell_state_povm(2);
  bad[0] = bad[0] * 0.5;
  EXPECT_THROW(QIScenario(rho, tet, tet, bad, bell_state_povm(2)), InvalidArgument);
  auto negative = bell_state_povm(2);
  negative[0] = negative[0] + negative[1] * 2.0;
  negative[1] = negative[1] * -1.0;
  EXPECT_THROW(QIScenario(rho, tet, tet, negative, bell_state_povm(2)), InvalidArgument);
}

}  // namespace
}  // namespace qiw
