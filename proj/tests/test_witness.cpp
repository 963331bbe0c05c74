#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiw/witness.hpp"
#include "support/test_support.hpp"

namespace qiw {
namespace {

// Reduction map X -> tr(X) 1 - X; Choi matrix 1 - d |Phi+><Phi+|.
PositiveMapSpec reduction_map(std::size_t d) {
  const ComplexMatrix choi =
      ComplexMatrix::identity(d * d) - max_entangled(d).projector() * static_cast<double>(d);
  return PositiveMapSpec::choi(choi, d, d);
}

double sum_beta(const RealMatrix& beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < beta.rows(); ++i)
    for (std::size_t j = 0; j < beta.cols(); ++j) s += beta(i, j);
  return s;
}

TEST(PositiveMap, TranspositionChoiIsFlip) {
  for (std::size_t d : {2u, 3u}) EXPECT_EQ(transposition_choi(d), flip_operator(d));
}

TEST(PositiveMap, ChoiPathReproducesTransposition) {
  std::mt19937_64 rng(2);
  const auto viaChoi = PositiveMapSpec::choi(transposition_choi(3), 3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = testing::random_complex(3, 3, rng);
    EXPECT_LT(max_abs_diff(apply_map(viaChoi, x), x.transpose()), 1e-14);
    EXPECT_LT(max_abs_diff(apply_map(viaChoi, x, true), x.transpose()), 1e-14);
  }
}

TEST(PositiveMap, ReductionMapAction) {
  std::mt19937_64 rng(6);
  const auto x = testing::random_complex(3, 3, rng);
  EXPECT_LT(max_abs_diff(apply_map(reduction_map(3), x), ComplexMatrix::identity(3) * x.trace() - x), 1e-13);
}

TEST(PositiveMap, DualityHoldsForRandomChoi) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dIn = 2 + trial % 2, dOut = 2 + trial % 3;
    const auto c = testing::random_hermitian(dIn * dOut, rng);
    const auto map = PositiveMapSpec::choi(c, dIn, dOut);
    const auto m = testing::random_complex(dIn, dIn, rng);
    const auto n = testing::random_complex(dOut, dOut, rng);
    const Complex lhs = trace_product(m, apply_map(map, n, true));
    const Complex rhs = trace_product(apply_map(map, m), n);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(PositiveMap, OnSubsystemBMatchesPartialTranspose) {
  std::mt19937_64 rng(14);
  const auto m = testing::random_complex(6, 6, rng);
  EXPECT_LT(max_abs_diff(apply_map_on_b(PositiveMapSpec::transposition(3), m, 2),
                         partial_transpose(m, 2, 3, Subsystem::B)),
            1e-15);
  EXPECT_LT(max_abs_diff(apply_map_on_b(PositiveMapSpec::choi(transposition_choi(3), 3, 3), m, 2),
                         partial_transpose(m, 2, 3, Subsystem::B)),
            1e-14);
}

TEST(PositiveMap, Validation) {
  EXPECT_THROW(PositiveMapSpec::choi(ComplexMatrix::identity(5), 2, 2), DimensionError);
  EXPECT_THROW(PositiveMapSpec::choi(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}, 1, 2), NotHermitian);
  EXPECT_THROW(apply_map(PositiveMapSpec::transposition(2), ComplexMatrix::identity(3)), DimensionError);
}

TEST(NegativeEigenstate, WernerQubit) {
  const auto ne = negative_eigenstate(werner_state(2, 1.0), PositiveMapSpec::transposition(2));
  EXPECT_NEAR(ne.lambda, -0.5, 1e-12);
  EXPECT_NEAR(std::norm(inner(ne.xi.amplitudes(), max_entangled(2).amplitudes())), 1.0, 1e-12);
}

TEST(NegativeEigenstate, WernerQutritAndGeneralVisibility) {
  for (std::size_t d : {2u, 3u, 4u})
    for (double v : {0.5, 0.75, 1.0}) {
      const auto ne = negative_eigenstate(werner_state(d, v), PositiveMapSpec::transposition(d));
      const double dd = static_cast<double>(d);
      EXPECT_NEAR(ne.lambda, (1.0 - (dd + 1.0) * v) / (dd * dd), 1e-12) << "d=" << d << " v=" << v;
      EXPECT_NEAR(std::norm(inner(ne.xi.amplitudes(), max_entangled(d).amplitudes())), 1.0, 1e-10);
    }
}

TEST(NegativeEigenstate, PptStateThrows) {
  EXPECT_THROW(negative_eigenstate(werner_state(2, 0.2), PositiveMapSpec::transposition(2)), NoNegativeEigenvalue);
  EXPECT_THROW(negative_eigenstate(werner_state(3, 0.25), PositiveMapSpec::transposition(3)), NoNegativeEigenvalue);
  std::mt19937_64 rng(1);
  const auto a = testing::random_density(2, 1, 2, rng).matrix();
  const auto b = testing::random_density(3, 1, 2, rng).matrix();
  EXPECT_THROW(negative_eigenstate(DensityMatrix(kron(a, b), 2, 3), PositiveMapSpec::transposition(3)),
               NoNegativeEigenvalue);
}

TEST(NegativeEigenstate, ReductionMapDetectsSinglet) {
  const auto ne = negative_eigenstate(werner_state(2, 1.0), reduction_map(2));
  EXPECT_NEAR(ne.lambda, -0.5, 1e-12);
}

TEST(BuildWitness, WernerBetaMatchesClosedForm) {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto e = sic_ensemble(d);
    const auto w = build_witness(werner_state(d, 1.0), PositiveMapSpec::transposition(d), e, e);
    const auto expected = werner_beta_closed_form(d);
    for (std::size_t s = 0; s < e.size(); ++s)
      for (std::size_t t = 0; t < e.size(); ++t) EXPECT_NEAR(w.beta(s, t), expected(s, t), 1e-9) << "d=" << d;
    EXPECT_NEAR(sum_beta(w.beta), 1.0, 1e-9);
    EXPECT_LE(reconstruction_defect(w), 1e-10);
  }
}

TEST(BuildWitness, QubitClosedFormValues) {
  const auto b = werner_beta_closed_form(2);
  EXPECT_DOUBLE_EQ(b(0, 0), 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(b(0, 1), -1.0 / 8.0);
  EXPECT_NEAR(sum_beta(b), 1.0, 1e-14);
  EXPECT_NEAR(sum_beta(werner_beta_closed_form(3)), 1.0, 1e-14);
}

TEST(BuildWitness, SingletValue) {
  const auto tet = tetrahedron_ensemble();
  const auto w = build_witness(werner_state(2, 1.0), PositiveMapSpec::transposition(2), tet, tet);
  const auto table = correlations(canonical_scenario(werner_state(2, 1.0), tet, tet));
  EXPECT_NEAR(evaluate_inequality(w, table), -1.0 / 8.0, 1e-12);
  EXPECT_NEAR(predicted_quantum_value(w, 2, 2), -1.0 / 8.0, 1e-12);
}

TEST(BuildWitness, QuantumValueMatchesPrediction) {
  for (std::size_t d : {2u, 3u})
    for (double v : {0.4, 0.7, 1.0}) {
      const auto e = sic_ensemble(d);
      const auto rho = werner_state(d, v);
      if (v <= 1.0 / static_cast<double>(d + 1)) continue;
      const auto w = build_witness(rho, PositiveMapSpec::transposition(d), e, e);
      const auto table = correlations(canonical_scenario(rho, e, e));
      EXPECT_NEAR(evaluate_inequality(w, table), predicted_quantum_value(w, d, d), 1e-10) << d << " " << v;
      EXPECT_LT(evaluate_inequality(w, table), 0.0);
    }
}

TEST(BuildWitness, FixedWitnessCrossesZeroAtSeparabilityThreshold) {
  // Coefficients from v = 1 applied to the whole Werner family.
  const auto tet = tetrahedron_ensemble();
  const auto w = build_witness(werner_state(2, 1.0), PositiveMapSpec::transposition(2), tet, tet);
  auto value = [&](double v) { return evaluate_inequality(w, correlations(canonical_scenario(werner_state(2, v), tet, tet))); };
  EXPECT_NEAR(value(1.0 / 3.0), 0.0, 1e-12);
  EXPECT_GT(value(0.2), 0.0);
  EXPECT_LT(value(0.5), 0.0);
  for (double v = -1.0 / 3.0; v <= 1.0; v += 0.05) EXPECT_NEAR(value(v), (1.0 - 3.0 * v) / 16.0, 1e-12) << v;
}

TEST(BuildWitness, RandomEntangledPureStates) {
  std::mt19937_64 rng(123);
  const std::size_t dims[][2] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  for (const auto& dd : dims) {
    const std::size_t dA = dd[0], dB = dd[1];
    const auto eA = sic_ensemble(dA), eB = sic_ensemble(dB);
    for (int trial = 0; trial < 5; ++trial) {
      const auto psi = testing::random_pure(dA * dB, rng);
      const auto rho = DensityMatrix::from_pure(psi, dA, dB);
      const auto w = build_witness(rho, PositiveMapSpec::transposition(dB), eA, eB);
      EXPECT_LT(w.lambda, 0.0);
      EXPECT_LE(reconstruction_defect(w), 1e-8);
      const auto table = correlations(canonical_scenario(rho, eA, eB));
      EXPECT_NEAR(evaluate_inequality(w, table), predicted_quantum_value(w, dA, dB), 1e-9);
    }
  }
}

TEST(BuildWitness, ChoiMapPathAgreesWithTransposition) {
  const auto e = sic_ensemble(3);
  const auto rho = werner_state(3, 0.9);
  const auto a = build_witness(rho, PositiveMapSpec::transposition(3), e, e);
  const auto b = build_witness(rho, PositiveMapSpec::choi(transposition_choi(3), 3, 3), e, e);
  EXPECT_NEAR(a.lambda, b.lambda, 1e-12);
  for (std::size_t s = 0; s < 9; ++s)
    for (std::size_t t = 0; t < 9; ++t) EXPECT_NEAR(a.beta(s, t), b.beta(s, t), 1e-9);
}

TEST(BuildWitness, ReductionMapWitnessIsConsistent) {
  const auto tet = tetrahedron_ensemble();
  const auto rho = werner_state(2, 0.8);
  const auto w = build_witness(rho, reduction_map(2), tet, tet);
  EXPECT_LE(reconstruction_defect(w), 1e-8);
  const auto table = correlations(canonical_scenario(rho, tet, tet));
  EXPECT_NEAR(evaluate_inequality(w, table), predicted_quantum_value(w, 2, 2), 1e-10);
}

TEST(BuildWitness, RejectsIncompleteEnsembles) {
  const auto rho = werner_state(2, 1.0);
  const auto map = PositiveMapSpec::transposition(2);
  EXPECT_THROW(build_witness(rho, map, computational_basis_ensemble(2), tetrahedron_ensemble()),
               NotInformationallyComplete);
  std::vector<PureState> flat;
  for (double phi : {0.0, 1.5, 3.0, 4.5}) flat.push_back(bloch_state({std::cos(phi), std::sin(phi), 0.0}));
  EXPECT_THROW(build_witness(rho, map, tetrahedron_ensemble(), InputEnsemble(flat)), NotInformationallyComplete);
  EXPECT_THROW(build_witness(rho, map, sic_ensemble(3), tetrahedron_ensemble()), DimensionError);
}

TEST(EvaluateInequality, ShapeCheck) {
  EXPECT_THROW(evaluate_inequality(RealMatrix(2, 2), RealMatrix(2, 3)), DimensionError);
}

}  // namespace
}  // namespace qiw
