#pragma once

#include <array>
#include <vector>

#include "qiw/qstates.hpp"

namespace qiw {

// Two-outcome measurement {E_0, E_1}.
using BinaryPovm = std::array<ComplexMatrix, 2>;

// Quantum-input scenario (rho, {phi_s}, {psi_t}, {A_a}, {B_b}). Alice's POVM
// acts on A' (x) A (input slot first), Bob's on B (x) B' (input slot last).
class QIScenario {
 public:
  QIScenario(DensityMatrix rho, InputEnsemble ensembleA, InputEnsemble ensembleB, BinaryPovm povmA,
             BinaryPovm povmB, double tol = kDefaultTol);

  const DensityMatrix& rho() const { return rho_; }
  const InputEnsemble& ensembleA() const { return ensembleA_; }
  const InputEnsemble& ensembleB() const { return ensembleB_; }
  const BinaryPovm& povmA() const { return povmA_; }
  const BinaryPovm& povmB() const { return povmB_; }
  std::size_t dimA() const { return rho_.dimA(); }
  std::size_t dimB() const { return rho_.dimB(); }

 private:
  DensityMatrix rho_;
  InputEnsemble ensembleA_;
  InputEnsemble ensembleB_;
  BinaryPovm povmA_;
  BinaryPovm povmB_;
};

// P(a, b | s, t) for binary outcomes, indexed 0-based in s and t.
class CorrelationTable {
 public:
  CorrelationTable() = default;
  CorrelationTable(std::size_t nS, std::size_t nT);

  std::size_t nS() const { return nS_; }
  std::size_t nT() const { return nT_; }

  double& operator()(int a, int b, std::size_t s, std::size_t t) { return p_[index(a, b, s, t)]; }
  double operator()(int a, int b, std::size_t s, std::size_t t) const { return p_[index(a, b, s, t)]; }

  // Largest |sum_ab P(a,b|s,t) - 1| over (s,t).
  double normalization_defect() const;
  double min_entry() const;

  bool operator==(const CorrelationTable&) const = default;

 private:
  std::size_t index(int a, int b, std::size_t s, std::size_t t) const {
    return ((static_cast<std::size_t>(a) * 2 + static_cast<std::size_t>(b)) * nS_ + s) * nT_ + t;
  }

  std::size_t nS_ = 0;
  std::size_t nT_ = 0;
  std::vector<double> p_;
};

// Measurement onto |Phi_d^+> with outcome 1 and its complement with outcome 0.
BinaryPovm bell_state_povm(std::size_t d);

QIScenario canonical_scenario(const DensityMatrix& rho, const InputEnsemble& eA, const InputEnsemble& eB);

// Side A: (<phi| (x) 1) E (|phi> (x) 1). Side B: (1 (x) <psi|) E (1 (x) |psi>).
ComplexMatrix effective_povm(const ComplexMatrix& element, const PureState& input, Subsystem side);

// tr[(X (x) Y) rho] without forming the tensor product.
double product_expectation(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& rho);

// Correlations via effective POVMs; OpenMP-parallel over (s, t).
CorrelationTable correlations(const QIScenario& sc);

namespace serial {
CorrelationTable correlations(const QIScenario& sc);
}  // namespace serial

enum class ClosedFormKind { Singlet, WernerQubit, WernerD };

struct ClosedFormModel {
  ClosedFormKind kind = ClosedFormKind::Singlet;
  std::size_t d = 2;
  double v = 1.0;

  static ClosedFormModel singlet() { return {ClosedFormKind::Singlet, 2, 1.0}; }
  static ClosedFormModel werner_qubit(double v) { return {ClosedFormKind::WernerQubit, 2, v}; }
  static ClosedFormModel werner(std::size_t d, double v) { return {ClosedFormKind::WernerD, d, v}; }
};

// Analytic P(a, b | s, t) for the canonical task with SIC inputs on both
// sides (tetrahedron for qubits). s and t are 0-based.
double closed_form_correlations(const ClosedFormModel& model, int a, int b, std::size_t s, std::size_t t);

}  // namespace qiw
