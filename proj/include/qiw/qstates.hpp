#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qiw/linalg.hpp"

namespace qiw {

// Normalized state vector. Construction rejects vectors whose norm differs
// from 1 by more than 1e-10; use PureState::normalized to rescale.
class PureState {
 public:
  PureState() = default;
  explicit PureState(ComplexVector amplitudes);

  static PureState normalized(ComplexVector amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  ComplexMatrix projector() const { return ComplexMatrix::projector(amplitudes_); }

 private:
  ComplexVector amplitudes_;
};

// Hermitian, unit-trace, PSD operator on C^dimA (x) C^dimB (dimB = 1 for a
// single system). Validated at construction within tol.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(ComplexMatrix matrix, std::size_t dimA, std::size_t dimB = 1, double tol = kDefaultTol);

  static DensityMatrix from_pure(const PureState& psi, std::size_t dimA, std::size_t dimB = 1);

  std::size_t dimA() const { return dimA_; }
  std::size_t dimB() const { return dimB_; }
  std::size_t dim() const { return dimA_ * dimB_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
  std::size_t dimA_ = 0;
  std::size_t dimB_ = 1;
};

// Ordered set of pure input states with cached rank-1 projectors. Reports
// number inputs from 1; indices here are 0-based and label(i) = i + 1.
class InputEnsemble {
 public:
  InputEnsemble() = default;
  explicit InputEnsemble(std::vector<PureState> states);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return states_.size(); }
  const PureState& state(std::size_t i) const { return states_.at(i); }
  const ComplexMatrix& projector(std::size_t i) const { return projectors_.at(i); }
  const std::vector<PureState>& states() const { return states_; }
  static std::size_t label(std::size_t index) { return index + 1; }

 private:
  std::size_t dim_ = 0;
  std::vector<PureState> states_;
  std::vector<ComplexMatrix> projectors_;
};

struct EnsembleDiagnostics {
  bool informationally_complete = false;
  bool usd_possible = false;
};

// |Phi_d^+> = sum_k |kk> / sqrt(d)
PureState max_entangled(std::size_t d);

// (|01> - |10>) / sqrt(2)
PureState singlet();

// F = sum_ij |ij><ji| on C^d (x) C^d.
ComplexMatrix flip_operator(std::size_t d);

// rho_d = v (1 - F) / (d (d - 1)) + (1 - v) 1 / d^2, for v in [-(d-1)/(d+1), 1].
DensityMatrix werner_state(std::size_t d, double v);

// rho_2 = v |Psi^-><Psi^-| + (1 - v) 1/4, for v in [-1/3, 1]. Coincides with
// werner_state(2, v) since (1 - F)/2 is the singlet projector.
DensityMatrix werner_qubit(double v);

// Qubit state whose projector is (1 + r.sigma)/2 for a unit Bloch vector r.
PureState bloch_state(const std::array<double, 3>& r);

// The four tetrahedron states (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1) / sqrt(3).
InputEnsemble tetrahedron_ensemble();

// d^2 states with pairwise overlap 1/(d+1). d = 2 is the tetrahedron, d = 3
// uses the fiducial (0, 1, -1)/sqrt(2); d in [4, 8] runs a seeded numerical
// fiducial search and throws SearchFailed if it does not converge.
InputEnsemble sic_ensemble(std::size_t d, std::uint64_t seed = 42);

// Weyl-Heisenberg orbit X^p Z^q |fiducial>, element index p * d + q.
InputEnsemble weyl_heisenberg_orbit(const PureState& fiducial);

// Sum over ordered pairs s != t of the orbit of (|<phi_s|phi_t>|^2 - 1/(d+1))^2.
double sic_fiducial_defect(std::span<const Complex> fiducial);

struct SicSearchOptions {
  int max_restarts = 400;
  int max_evaluations = 40000;  // per restart
  double target = 1e-16;        // on the pairwise objective
};

// Fiducial search; the returned state meets options.target or SearchFailed is thrown.
PureState search_sic_fiducial(std::size_t d, std::uint64_t seed, const SicSearchOptions& options = {});

// Computational basis {|0>, ..., |d-1>}.
InputEnsemble computational_basis_ensemble(std::size_t d);

EnsembleDiagnostics ensemble_diagnostics(const InputEnsemble& e);

}  // namespace qiw
