#pragma once

// Bell-like inequality I(P) = sum_st beta_st P(1,1|s,t) >= 0 built from a
// negative eigenvector of (1 (x) Lambda)(rho).

#include <optional>
#include <string>

#include "qiw/scenario.hpp"

namespace qiw {

enum class MapKind { Transposition, Choi };

// Positive map acting on subsystem B. The Choi form stores
// C = sum_ij |i><j| (x) Lambda(|i><j|) (input index first). Positivity of a
// user-supplied Choi matrix is trusted; only Hermiticity is checked.
class PositiveMapSpec {
 public:
  static PositiveMapSpec transposition(std::size_t d);
  static PositiveMapSpec choi(ComplexMatrix matrix, std::size_t dimIn, std::size_t dimOut,
                              double tol = kDefaultTol);

  MapKind kind() const { return kind_; }
  std::size_t input_dim() const { return dimIn_; }
  std::size_t output_dim() const { return dimOut_; }
  // Present only for MapKind::Choi.
  const std::optional<ComplexMatrix>& choi_matrix() const { return choi_; }
  std::string name() const { return kind_ == MapKind::Transposition ? "transposition" : "choi"; }

 private:
  PositiveMapSpec(MapKind kind, std::size_t dimIn, std::size_t dimOut, std::optional<ComplexMatrix> choi)
      : kind_(kind), dimIn_(dimIn), dimOut_(dimOut), choi_(std::move(choi)) {}

  MapKind kind_;
  std::size_t dimIn_;
  std::size_t dimOut_;
  std::optional<ComplexMatrix> choi_;
};

// Choi matrix of the transposition on C^d (the flip operator).
ComplexMatrix transposition_choi(std::size_t d);

// Lambda(X), or the dual Lambda*(X) defined by tr[M Lambda*(N)] = tr[Lambda(M) N].
ComplexMatrix apply_map(const PositiveMapSpec& map, const ComplexMatrix& x, bool dual = false);

// (1 (x) Lambda)(M) (or with Lambda*) for M on C^dimA (x) C^(map input).
ComplexMatrix apply_map_on_b(const PositiveMapSpec& map, const ComplexMatrix& m, std::size_t dimA,
                             bool dual = false);

struct NegativeEigenstate {
  double lambda = 0.0;
  PureState xi;
};

// Most negative eigenpair of (1 (x) Lambda)(rho). Throws NoNegativeEigenvalue
// when the minimum eigenvalue is >= -1e-10.
NegativeEigenstate negative_eigenstate(const DensityMatrix& rho, const PositiveMapSpec& map);

struct WitnessCoefficients {
  RealMatrix beta;  // [s][t]
  double lambda = 0.0;
  PureState xi;
  PositiveMapSpec map = PositiveMapSpec::transposition(2);
  InputEnsemble ensembleA;
  InputEnsemble ensembleB;

  std::size_t dimA() const { return ensembleA.dim(); }
  std::size_t dimB() const { return ensembleB.dim(); }
};

// Solves (1 (x) Lambda*)(|xi><xi|) = sum_st beta_st phi_s^T (x) psi_t^T.
// Throws NotInformationallyComplete when the ensembles do not span the
// operator spaces.
WitnessCoefficients build_coefficients(const PureState& xi, double lambda, const PositiveMapSpec& map,
                                       const InputEnsemble& eA, const InputEnsemble& eB);

// negative_eigenstate followed by build_coefficients.
WitnessCoefficients build_witness(const DensityMatrix& rho, const PositiveMapSpec& map,
                                  const InputEnsemble& eA, const InputEnsemble& eB);

// sum_st beta_st phi_s^T (x) psi_t^T
ComplexMatrix witness_operator(const WitnessCoefficients& w);

// max entrywise |witness_operator(w) - (1 (x) Lambda*)(|xi><xi|)|
double reconstruction_defect(const WitnessCoefficients& w);

double evaluate_inequality(const RealMatrix& beta, const RealMatrix& p11);
double evaluate_inequality(const WitnessCoefficients& w, const CorrelationTable& table);

// lambda / (dA dB): the value the canonical quantum correlations attain.
double predicted_quantum_value(const WitnessCoefficients& w, std::size_t dimA, std::size_t dimB);

// beta_st = (d (d + 1) delta_st - 1) / d^3 for Werner states with SIC inputs.
RealMatrix werner_beta_closed_form(std::size_t d);

// P(1,1|s,t) slice of a correlation table.
RealMatrix p11_slice(const CorrelationTable& table);

}  // namespace qiw
