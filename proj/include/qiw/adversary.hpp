#pragma once

// Classical side of the witness: correlations from separable measurements on
// the quantum inputs, and seeded searches that try (and must fail) to push
// I below zero with them.

#include <cstdint>
#include <utility>
#include <vector>

#include "qiw/witness.hpp"

namespace qiw {

// Pi_11 = sum_k M_k (x) N_k with every factor PSD and Pi_11 <= 1.
class SeparableStrategy {
 public:
  using Term = std::pair<ComplexMatrix, ComplexMatrix>;

  SeparableStrategy() = default;
  explicit SeparableStrategy(std::vector<Term> terms, double tol = kDefaultTol);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t dimA() const { return terms_.empty() ? 0 : terms_.front().first.rows(); }
  std::size_t dimB() const { return terms_.empty() ? 0 : terms_.front().second.rows(); }
  ComplexMatrix pi11() const;

  bool operator==(const SeparableStrategy&) const = default;

 private:
  std::vector<Term> terms_;
};

// Local discrimination POVMs with outcomes 0..n-1 (label guesses) followed by
// one inconclusive outcome; output_one(g, h) says whether guesses (g, h)
// produce a = b = 1.
class GuessStrategy {
 public:
  GuessStrategy(std::vector<ComplexMatrix> discriminationA, std::vector<ComplexMatrix> discriminationB,
                std::vector<std::vector<bool>> outputRule, double tol = kDefaultTol);

  // Rule that outputs 1 for the listed guess pairs only; inconclusive maps to 0.
  static std::vector<std::vector<bool>> rule_for_pairs(std::size_t outcomesA, std::size_t outcomesB,
                                                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

  const std::vector<ComplexMatrix>& discriminationA() const { return discA_; }
  const std::vector<ComplexMatrix>& discriminationB() const { return discB_; }
  bool output_one(std::size_t g, std::size_t h) const { return rule_[g][h]; }
  std::size_t inconclusiveA() const { return discA_.size() - 1; }
  std::size_t inconclusiveB() const { return discB_.size() - 1; }

  SeparableStrategy to_separable() const;

 private:
  std::vector<ComplexMatrix> discA_;
  std::vector<ComplexMatrix> discB_;
  std::vector<std::vector<bool>> rule_;
};

// Pretty-good measurement for an equiprobable ensemble: E_s = S^{-1/2} P_s S^{-1/2} / n
// with S = sum_s P_s / n, followed by an all-zero inconclusive element.
std::vector<ComplexMatrix> pretty_good_measurement(const InputEnsemble& e);

// P(1,1|s,t) = sum_k <phi_s|M_k|phi_s> <psi_t|N_k|psi_t>
RealMatrix separable_correlation(const SeparableStrategy& strat, const InputEnsemble& eA, const InputEnsemble& eB);
RealMatrix guess_strategy_correlation(const GuessStrategy& strat, const InputEnsemble& eA, const InputEnsemble& eB);

// tr[|xi><xi| (M^T (x) Lambda(N^T))] for a single-term strategy.
double single_term_identity(const WitnessCoefficients& w, const ComplexMatrix& m, const ComplexMatrix& n);

// Deterministic RNG for work item `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Random PSD contraction: G^dagger G / ||G^dagger G|| scaled by u ~ U[0,1],
// with G complex Ginibre.
ComplexMatrix sample_psd_contraction(std::size_t d, std::uint64_t rng_seed);

// Single-term strategy for sample `index` of a seeded stream.
SeparableStrategy sample_strategy(std::size_t dimA, std::size_t dimB, std::uint64_t seed, std::uint64_t index);

struct SampleReport {
  std::size_t samples = 0;
  double min_value = 0.0;
  std::size_t argmin = 0;  // sample index attaining min_value (lowest on ties)
};

// Evaluates I on `samples` sampled strategies; workers = 0 uses the OpenMP default.
SampleReport sample_inequality(const WitnessCoefficients& w, std::size_t samples, std::uint64_t seed,
                               int workers = 0);

struct OptimizerResult {
  double min_value = 0.0;
  SeparableStrategy strategy;
  std::size_t best_restart = 0;
};

// Seeded random-restart alternating minimization over Pi_11 = M (x) N.
// `budget` is the number of restarts; each restart alternates exact
// minimizations over M in [0, 1] for fixed N and vice versa.
OptimizerResult minimize_inequality(const WitnessCoefficients& w, std::size_t budget, std::uint64_t seed,
                                    int workers = 0);

namespace serial {
SampleReport sample_inequality(const WitnessCoefficients& w, std::size_t samples, std::uint64_t seed);
OptimizerResult minimize_inequality(const WitnessCoefficients& w, std::size_t budget, std::uint64_t seed);
}  // namespace serial

}  // namespace qiw
