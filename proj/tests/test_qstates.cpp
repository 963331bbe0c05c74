#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiw/qstates.hpp"

namespace qiw {
namespace {

double overlap_sq(const PureState& a, const PureState& b) { return std::norm(inner(a.amplitudes(), b.amplitudes())); }

TEST(MaxEntangled, Amplitudes) {
  const auto q = max_entangled(2);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(q[0].real(), h, 1e-15);
  EXPECT_EQ(q[1], Complex(0.0));
  EXPECT_EQ(q[2], Complex(0.0));
  EXPECT_NEAR(q[3].real(), h, 1e-15);
  const auto t = max_entangled(3);
  for (std::size_t i = 0; i < 9; ++i)
    EXPECT_NEAR(std::abs(t[i]), (i == 0 || i == 4 || i == 8) ? 1.0 / std::sqrt(3.0) : 0.0, 1e-16);
  for (std::size_t d : {2u, 3u, 5u})
    EXPECT_LT(max_abs_diff(partial_trace(max_entangled(d).projector(), d, d, Subsystem::A),
                           ComplexMatrix::identity(d) * (1.0 / static_cast<double>(d))),
              1e-15);
  EXPECT_THROW(max_entangled(1), InvalidArgument);
}

TEST(Singlet, AmplitudesAndOrthogonality) {
  const auto s = singlet();
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s[1].real(), h, 1e-15);
  EXPECT_NEAR(s[2].real(), -h, 1e-15);
  EXPECT_EQ(s[0], Complex(0.0));
  EXPECT_EQ(s[3], Complex(0.0));
  EXPECT_NEAR(std::abs(inner(s.amplitudes(), max_entangled(2).amplitudes())), 0.0, 1e-16);
  EXPECT_LT(max_abs_diff(werner_state(2, 1.0).matrix(), s.projector()), 1e-15);
}

TEST(FlipOperator, DefinitionTraceAndAction) {
  const auto f2 = flip_operator(2);
  EXPECT_EQ(f2(0, 0), Complex(1.0));
  EXPECT_EQ(f2(3, 3), Complex(1.0));
  EXPECT_EQ(f2(1, 2), Complex(1.0));
  EXPECT_EQ(f2(2, 1), Complex(1.0));
  EXPECT_EQ(f2(1, 1), Complex(0.0));
  EXPECT_NEAR(flip_operator(3).trace().real(), 3.0, 1e-15);
  EXPECT_EQ(flip_operator(3) * flip_operator(3), ComplexMatrix::identity(9));

  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    ComplexVector a(3), b(3);
    for (auto& z : a) z = Complex(g(rng), g(rng));
    for (auto& z : b) z = Complex(g(rng), g(rng));
    const auto swapped = flip_operator(3) * kron(a, b);
    const auto expected = kron(b, a);
    for (std::size_t i = 0; i < 9; ++i) EXPECT_LT(std::abs(swapped[i] - expected[i]), 1e-14);
  }
  EXPECT_THROW(flip_operator(1), InvalidArgument);
}

TEST(WernerState, Endpoints) {
  EXPECT_LT(max_abs_diff(werner_state(2, 1.0).matrix(), singlet().projector()), 1e-15);
  EXPECT_LT(max_abs_diff(werner_state(2, 0.0).matrix(), ComplexMatrix::identity(4) * 0.25), 1e-15);
}

TEST(WernerState, QubitConventionsCoincide) {
  for (double v = -1.0 / 3.0; v <= 1.0; v += 0.1)
    EXPECT_LT(max_abs_diff(werner_state(2, v).matrix(), werner_qubit(v).matrix()), 1e-15) << v;
}

TEST(WernerState, PartialTransposeMinimum) {
  const auto pt = partial_transpose(werner_state(3, 0.5).matrix(), 3, 3, Subsystem::B);
  EXPECT_NEAR(eig_hermitian(pt).eigenvalues.front(), -1.0 / 9.0, 1e-14);
}

TEST(WernerState, VisibilityRange) {
  EXPECT_THROW(werner_state(2, 1.01), InvalidArgument);
  EXPECT_THROW(werner_state(2, -0.34), InvalidArgument);
  EXPECT_NO_THROW(werner_state(2, -1.0 / 3.0));
  EXPECT_NO_THROW(werner_state(3, -0.5));
  EXPECT_THROW(werner_state(3, -0.51), InvalidArgument);
  EXPECT_THROW(werner_qubit(-0.4), InvalidArgument);
  EXPECT_THROW(werner_state(1, 0.0), InvalidArgument);
}

TEST(WernerState, NptExactlyAboveThreshold) {
  for (std::size_t d : {2u, 3u, 4u}) {
    const double threshold = 1.0 / static_cast<double>(d + 1);
    for (int k = 0; k <= 20; ++k) {
      const double v = 0.05 * k;
      const auto rho = werner_state(d, v);
      const bool npt = !is_psd(partial_transpose(rho.matrix(), d, d, Subsystem::B), 1e-12);
      if (std::abs(v - threshold) > 1e-9) EXPECT_EQ(npt, v > threshold) << "d=" << d << " v=" << v;
    }
  }
}

TEST(Tetrahedron, OverlapsAndFrame) {
  const auto e = tetrahedron_ensemble();
  ASSERT_EQ(e.size(), 4u);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(overlap_sq(e.state(s), e.state(t)), s == t ? 1.0 : 1.0 / 3.0, 1e-15);
  ComplexMatrix sum(2, 2);
  for (std::size_t s = 0; s < 4; ++s) sum += e.projector(s);
  EXPECT_LT(max_abs_diff(sum, ComplexMatrix::identity(2) * 2.0), 1e-15);
}

TEST(Tetrahedron, ProjectorsMatchBlochForm) {
  const double r = 1.0 / std::sqrt(3.0);
  const double v[4][3] = {{r, r, r}, {r, -r, -r}, {-r, r, -r}, {-r, -r, r}};
  const auto e = tetrahedron_ensemble();
  for (std::size_t s = 0; s < 4; ++s) {
    // (1 + v.sigma)/2
    ComplexMatrix expected{{0.5 * (1.0 + v[s][2]), 0.5 * Complex(v[s][0], -v[s][1])},
                           {0.5 * Complex(v[s][0], v[s][1]), 0.5 * (1.0 - v[s][2])}};
    EXPECT_LE(max_abs_diff(e.projector(s), expected), 1e-15) << "s=" << s + 1;
  }
}

class SicEnsembleTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(SicEnsembleTest, PairwiseOverlapsAndFrame) {
  const std::size_t d = GetParam();
  const auto e = sic_ensemble(d, 42);
  ASSERT_EQ(e.size(), d * d);
  const double off = 1.0 / static_cast<double>(d + 1);
  for (std::size_t s = 0; s < e.size(); ++s)
    for (std::size_t t = 0; t < e.size(); ++t)
      EXPECT_NEAR(overlap_sq(e.state(s), e.state(t)), s == t ? 1.0 : off, 1e-8);
  ComplexMatrix frame(d, d);
  for (std::size_t s = 0; s < e.size(); ++s) frame += e.projector(s) * (1.0 / static_cast<double>(d));
  EXPECT_LT(max_abs_diff(frame, ComplexMatrix::identity(d)), 1e-8);
  EXPECT_TRUE(ensemble_diagnostics(e).informationally_complete);
  EXPECT_FALSE(ensemble_diagnostics(e).usd_possible);
}

INSTANTIATE_TEST_SUITE_P(Dimensions, SicEnsembleTest, ::testing::Values(2u, 3u, 4u, 5u, 6u));

TEST(SicEnsemble, QubitIsTetrahedronAndQutritUsesAnalyticFiducial) {
  const auto two = sic_ensemble(2, 1);
  const auto tet = tetrahedron_ensemble();
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(two.projector(s), tet.projector(s));
  const auto three = sic_ensemble(3, 999);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(three.state(0)[0]), 0.0, 1e-16);
  EXPECT_NEAR(three.state(0)[1].real(), h, 1e-15);
  EXPECT_NEAR(three.state(0)[2].real(), -h, 1e-15);
}

TEST(SicEnsemble, SeededSearchIsReproducible) {
  const auto a = sic_ensemble(4, 7), b = sic_ensemble(4, 7);
  for (std::size_t s = 0; s < a.size(); ++s) EXPECT_EQ(a.projector(s), b.projector(s));
}

TEST(SicEnsemble, SearchFailureAndRange) {
  SicSearchOptions starved;
  starved.max_restarts = 1;
  starved.max_evaluations = 3;
  EXPECT_THROW(search_sic_fiducial(5, 42, starved), SearchFailed);
  EXPECT_THROW(sic_ensemble(9, 42), InvalidArgument);
  EXPECT_THROW(sic_ensemble(1, 42), InvalidArgument);
}

TEST(EnsembleDiagnostics, Cases) {
  const auto tet = ensemble_diagnostics(tetrahedron_ensemble());
  EXPECT_TRUE(tet.informationally_complete);
  EXPECT_FALSE(tet.usd_possible);

  const auto basis = ensemble_diagnostics(computational_basis_ensemble(2));
  EXPECT_FALSE(basis.informationally_complete);
  EXPECT_TRUE(basis.usd_possible);

  std::vector<PureState> equatorial;
  for (double phi : {0.0, 2.0, 4.0}) equatorial.push_back(bloch_state({std::cos(phi), std::sin(phi), 0.0}));
  const auto eq = ensemble_diagnostics(InputEnsemble(std::move(equatorial)));
  EXPECT_FALSE(eq.informationally_complete);
  EXPECT_FALSE(eq.usd_possible);

  // Non-orthogonal but linearly independent: unambiguous discrimination possible.
  std::vector<PureState> pair{bloch_state({0.0, 0.0, 1.0}), bloch_state({1.0, 0.0, 0.0})};
  EXPECT_TRUE(ensemble_diagnostics(InputEnsemble(std::move(pair))).usd_possible);
}

TEST(PureStateAndDensity, Validation) {
  EXPECT_THROW(PureState(ComplexVector{1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(PureState::normalized(ComplexVector{0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(4), 2, 2), InvalidArgument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(4) * 0.25, 2, 3), DimensionError);
  ComplexMatrix neg = ComplexMatrix::identity(2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(neg, 2), InvalidArgument);
  EXPECT_THROW(InputEnsemble({PureState::basis(2, 0), PureState::basis(3, 0)}), DimensionError);
}

}  // namespace
}  // namespace qiw
