#include "qiw/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qiw {

namespace {

double expectation(const ComplexMatrix& op, const PureState& psi) {
  const ComplexVector v = op * psi.amplitudes();
  return std::real(inner(psi.amplitudes(), v));
}

std::vector<double> expectations(const ComplexMatrix& op, const InputEnsemble& e) {
  std::vector<double> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = expectation(op, e.state(i));
  return out;
}

void validate_povm(const std::vector<ComplexMatrix>& povm, const char* who, double tol) {
  if (povm.size() < 2) throw InvalidArgument(std::string(who) + ": need at least one guess and the inconclusive outcome");
  const std::size_t d = povm.front().rows();
  ComplexMatrix sum(d, d);
  for (const auto& e : povm) {
    if (!e.square() || e.rows() != d) throw DimensionError(std::string(who) + ": POVM elements differ in size");
    if (!is_psd(e, tol)) throw InvalidArgument(std::string(who) + ": POVM element is not PSD");
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(d)) > tol)
    throw InvalidArgument(std::string(who) + ": POVM elements do not sum to identity");
}

// Exact argmin of tr(X K) over 0 <= X <= 1: projector onto the negative eigenspace of K.
ComplexMatrix negative_part_projector(const ComplexMatrix& k) {
  return hermitian_function(k, [](double l) { return l < 0.0 ? 1.0 : 0.0; }, 1e-8);
}

// sum_i c_i P_i over an ensemble.
ComplexMatrix weighted_projector_sum(const InputEnsemble& e, const std::vector<double>& c) {
  ComplexMatrix k(e.dim(), e.dim());
  for (std::size_t i = 0; i < e.size(); ++i) k += e.projector(i) * c[i];
  // Symmetrize away rounding so the eigensolver sees an exact Hermitian matrix.
  return (k + k.adjoint()) * 0.5;
}

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  ComplexMatrix m;
  ComplexMatrix n;
};

RestartOutcome run_restart(const WitnessCoefficients& w, std::uint64_t restart_seed) {
  const auto& eA = w.ensembleA;
  const auto& eB = w.ensembleB;
  const std::size_t nS = w.beta.rows(), nT = w.beta.cols();
  RestartOutcome out;
  out.n = sample_psd_contraction(eB.dim(), restart_seed);
  out.m = ComplexMatrix(eA.dim(), eA.dim());

  constexpr int kMaxSweeps = 100;
  double previous = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const auto b = expectations(out.n, eB);
    std::vector<double> ca(nS, 0.0);
    for (std::size_t s = 0; s < nS; ++s)
      for (std::size_t t = 0; t < nT; ++t) ca[s] += w.beta(s, t) * b[t];
    out.m = negative_part_projector(weighted_projector_sum(eA, ca));

    const auto a = expectations(out.m, eA);
    std::vector<double> cb(nT, 0.0);
    for (std::size_t s = 0; s < nS; ++s)
      for (std::size_t t = 0; t < nT; ++t) cb[t] += w.beta(s, t) * a[s];
    const ComplexMatrix kb = weighted_projector_sum(eB, cb);
    out.n = negative_part_projector(kb);
    const double value = trace_product(out.n, kb).real();
    if (!(value < previous - 1e-15)) {
      previous = std::min(previous, value);
      break;
    }
    previous = value;
  }
  // Re-evaluate from the final factors through the correlation path.
  const auto a = expectations(out.m, eA);
  const auto b = expectations(out.n, eB);
  double value = 0.0;
  for (std::size_t s = 0; s < nS; ++s)
    for (std::size_t t = 0; t < nT; ++t) value += w.beta(s, t) * a[s] * b[t];
  out.value = value;
  return out;
}

double sampled_value(const WitnessCoefficients& w, std::uint64_t seed, std::uint64_t index) {
  const SeparableStrategy strat = sample_strategy(w.dimA(), w.dimB(), seed, index);
  return evaluate_inequality(w.beta, separable_correlation(strat, w.ensembleA, w.ensembleB));
}

}  // namespace

SeparableStrategy::SeparableStrategy(std::vector<Term> terms, double tol) : terms_(std::move(terms)) {
  if (terms_.empty()) return;
  const std::size_t dA = terms_.front().first.rows(), dB = terms_.front().second.rows();
  for (const auto& [m, n] : terms_) {
    if (!m.square() || !n.square() || m.rows() != dA || n.rows() != dB)
      throw DimensionError("SeparableStrategy: term factors have inconsistent shapes");
    if (!is_psd(m, tol) || !is_psd(n, tol)) throw InvalidArgument("SeparableStrategy: term factor is not PSD");
  }
  if (!is_psd(ComplexMatrix::identity(dA * dB) - pi11(), tol))
    throw InvalidArgument("SeparableStrategy: Pi_11 exceeds the identity");
}

ComplexMatrix SeparableStrategy::pi11() const {
  if (terms_.empty()) return {};
  ComplexMatrix sum(dimA() * dimB(), dimA() * dimB());
  for (const auto& [m, n] : terms_) sum += kron(m, n);
  return sum;
}

GuessStrategy::GuessStrategy(std::vector<ComplexMatrix> discriminationA, std::vector<ComplexMatrix> discriminationB,
                             std::vector<std::vector<bool>> outputRule, double tol)
    : discA_(std::move(discriminationA)), discB_(std::move(discriminationB)), rule_(std::move(outputRule)) {
  validate_povm(discA_, "GuessStrategy discriminationA", tol);
  validate_povm(discB_, "GuessStrategy discriminationB", tol);
  if (rule_.size() != discA_.size())
    throw DimensionError("GuessStrategy: output rule has " + std::to_string(rule_.size()) + " rows for " +
                         std::to_string(discA_.size()) + " outcomes");
  for (const auto& row : rule_)
    if (row.size() != discB_.size()) throw DimensionError("GuessStrategy: output rule row has wrong length");
}

std::vector<std::vector<bool>> GuessStrategy::rule_for_pairs(
    std::size_t outcomesA, std::size_t outcomesB, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<std::vector<bool>> rule(outcomesA, std::vector<bool>(outcomesB, false));
  for (const auto& [g, h] : pairs) {
    if (g + 1 >= outcomesA || h + 1 >= outcomesB)
      throw InvalidArgument("GuessStrategy::rule_for_pairs: pair refers to an inconclusive or missing outcome");
    rule[g][h] = true;
  }
  return rule;
}

SeparableStrategy GuessStrategy::to_separable() const {
  std::vector<SeparableStrategy::Term> terms;
  for (std::size_t g = 0; g < discA_.size(); ++g)
    for (std::size_t h = 0; h < discB_.size(); ++h)
      if (rule_[g][h]) terms.emplace_back(discA_[g], discB_[h]);
  return SeparableStrategy(std::move(terms));
}

std::vector<ComplexMatrix> pretty_good_measurement(const InputEnsemble& e) {
  const std::size_t d = e.dim(), n = e.size();
  ComplexMatrix avg(d, d);
  for (std::size_t s = 0; s < n; ++s) avg += e.projector(s) * (1.0 / static_cast<double>(n));
  const ComplexMatrix inv_sqrt =
      hermitian_function(avg, [](double l) { return l > 1e-12 ? 1.0 / std::sqrt(l) : 0.0; });
  std::vector<ComplexMatrix> povm;
  ComplexMatrix used(d, d);
  for (std::size_t s = 0; s < n; ++s) {
    ComplexMatrix el = inv_sqrt * e.projector(s) * inv_sqrt * (1.0 / static_cast<double>(n));
    el = (el + el.adjoint()) * 0.5;
    used += el;
    povm.push_back(std::move(el));
  }
  ComplexMatrix rest = ComplexMatrix::identity(d) - used;
  povm.push_back((rest + rest.adjoint()) * 0.5);
  return povm;
}

RealMatrix separable_correlation(const SeparableStrategy& strat, const InputEnsemble& eA, const InputEnsemble& eB) {
  RealMatrix out(eA.size(), eB.size());
  if (strat.terms().empty()) return out;
  if (strat.dimA() != eA.dim() || strat.dimB() != eB.dim())
    throw DimensionError("separable_correlation: strategy acts on " + std::to_string(strat.dimA()) + "x" +
                         std::to_string(strat.dimB()) + ", ensembles have " + std::to_string(eA.dim()) + "x" +
                         std::to_string(eB.dim()));
  for (const auto& [m, n] : strat.terms()) {
    const auto a = expectations(m, eA);
    const auto b = expectations(n, eB);
    for (std::size_t s = 0; s < eA.size(); ++s)
      for (std::size_t t = 0; t < eB.size(); ++t) out(s, t) += a[s] * b[t];
  }
  return out;
}

RealMatrix guess_strategy_correlation(const GuessStrategy& strat, const InputEnsemble& eA, const InputEnsemble& eB) {
  if (strat.discriminationA().front().rows() != eA.dim() || strat.discriminationB().front().rows() != eB.dim())
    throw DimensionError("guess_strategy_correlation: POVM dimension differs from ensemble dimension");
  // Outcome distributions per input.
  std::vector<std::vector<double>> pa(eA.size()), pb(eB.size());
  for (std::size_t s = 0; s < eA.size(); ++s)
    for (const auto& el : strat.discriminationA()) pa[s].push_back(expectation(el, eA.state(s)));
  for (std::size_t t = 0; t < eB.size(); ++t)
    for (const auto& el : strat.discriminationB()) pb[t].push_back(expectation(el, eB.state(t)));

  RealMatrix out(eA.size(), eB.size());
  for (std::size_t s = 0; s < eA.size(); ++s)
    for (std::size_t t = 0; t < eB.size(); ++t) {
      double p = 0.0;
      for (std::size_t g = 0; g < pa[s].size(); ++g)
        for (std::size_t h = 0; h < pb[t].size(); ++h)
          if (strat.output_one(g, h)) p += pa[s][g] * pb[t][h];
      out(s, t) = p;
    }
  return out;
}

double single_term_identity(const WitnessCoefficients& w, const ComplexMatrix& m, const ComplexMatrix& n) {
  const ComplexMatrix op = kron(m.transpose(), apply_map(w.map, n.transpose()));
  const ComplexVector v = op * w.xi.amplitudes();
  return std::real(inner(w.xi.amplitudes(), v));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over a combination of the two words
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix sample_psd_contraction(std::size_t d, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ComplexMatrix g(d, d);
  for (auto& z : g.data()) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    z = Complex(re, im);
  }
  ComplexMatrix p = g.adjoint() * g;
  p = (p + p.adjoint()) * 0.5;
  const double top = spectral_max(p);
  const double scale = unit(rng);
  return p * (scale / top);
}

SeparableStrategy sample_strategy(std::size_t dimA, std::size_t dimB, std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t s = derive_seed(seed, index);
  std::vector<SeparableStrategy::Term> terms;
  terms.emplace_back(sample_psd_contraction(dimA, derive_seed(s, 0)), sample_psd_contraction(dimB, derive_seed(s, 1)));
  return SeparableStrategy(std::move(terms));
}

SampleReport sample_inequality(const WitnessCoefficients& w, std::size_t samples, std::uint64_t seed, int workers) {
  SampleReport report;
  report.samples = samples;
  if (samples == 0) return report;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  const auto total = static_cast<std::ptrdiff_t>(samples);
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
#endif
#pragma omp parallel num_threads(threads)
  {
    double local = std::numeric_limits<double>::infinity();
    std::size_t local_index = 0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < total; ++i) {
      const double value = sampled_value(w, seed, static_cast<std::uint64_t>(i));
      if (value < local) {
        local = value;
        local_index = static_cast<std::size_t>(i);
      }
    }
#pragma omp critical(qiw_sample_min)
    {
      if (local < best || (local == best && local_index < best_index)) {
        best = local;
        best_index = local_index;
      }
    }
  }
  report.min_value = best;
  report.argmin = best_index;
  return report;
}

OptimizerResult minimize_inequality(const WitnessCoefficients& w, std::size_t budget, std::uint64_t seed, int workers) {
  if (budget < 1) throw InvalidArgument("minimize_inequality: budget must be at least 1");
  std::vector<RestartOutcome> outcomes(budget);
  const auto total = static_cast<std::ptrdiff_t>(budget);
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t r = 0; r < total; ++r)
    outcomes[static_cast<std::size_t>(r)] = run_restart(w, derive_seed(seed, static_cast<std::uint64_t>(r)));

  std::size_t best = 0;
  for (std::size_t r = 1; r < budget; ++r)
    if (outcomes[r].value < outcomes[best].value) best = r;
  OptimizerResult result;
  result.min_value = outcomes[best].value;
  result.best_restart = best;
  result.strategy = SeparableStrategy({{outcomes[best].m, outcomes[best].n}});
  return result;
}

namespace serial {

SampleReport sample_inequality(const WitnessCoefficients& w, std::size_t samples, std::uint64_t seed) {
  SampleReport report;
  report.samples = samples;
  if (samples == 0) return report;
  report.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    const double value = sampled_value(w, seed, i);
    if (value < report.min_value) {
      report.min_value = value;
      report.argmin = i;
    }
  }
  return report;
}

OptimizerResult minimize_inequality(const WitnessCoefficients& w, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw InvalidArgument("minimize_inequality: budget must be at least 1");
  OptimizerResult result;
  RestartOutcome best;
  for (std::size_t r = 0; r < budget; ++r) {
    RestartOutcome o = run_restart(w, derive_seed(seed, r));
    if (o.value < best.value) {
      best = std::move(o);
      result.best_restart = r;
    }
  }
  result.min_value = best.value;
  result.strategy = SeparableStrategy({{best.m, best.n}});
  return result;
}

}  // namespace serial

}  // namespace qiw
