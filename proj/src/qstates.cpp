#include "qiw/qstates.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "nelder_mead.hpp"

namespace qiw {

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw InvalidArgument("PureState: empty amplitude vector");
  const double n = norm2(amplitudes_);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-10)
    throw InvalidArgument("PureState: norm " + std::to_string(n) + " differs from 1");
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double n = norm2(amplitudes);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("PureState: cannot normalize zero vector");
  for (auto& a : amplitudes) a /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("PureState::basis: index out of range");
  ComplexVector a(dim);
  a[index] = 1.0;
  return PureState(std::move(a));
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::size_t dimA, std::size_t dimB, double tol)
    : matrix_(std::move(matrix)), dimA_(dimA), dimB_(dimB) {
  if (dimA_ == 0 || dimB_ == 0 || !matrix_.square() || matrix_.rows() != dimA_ * dimB_)
    throw DimensionError("DensityMatrix: matrix is not " + std::to_string(dimA_) + "x" +
                         std::to_string(dimB_));
  if (!matrix_.all_finite()) throw InvalidArgument("DensityMatrix: non-finite entry");
  if (!is_hermitian(matrix_, tol)) throw NotHermitian("DensityMatrix: matrix is not Hermitian");
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol)
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
  if (!is_psd(matrix_, tol)) throw InvalidArgument("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi, std::size_t dimA, std::size_t dimB) {
  return DensityMatrix(psi.projector(), dimA, dimB);
}

InputEnsemble::InputEnsemble(std::vector<PureState> states) : states_(std::move(states)) {
  if (states_.empty()) throw InvalidArgument("InputEnsemble: no states");
  dim_ = states_.front().dim();
  projectors_.reserve(states_.size());
  for (const auto& s : states_) {
    if (s.dim() != dim_) throw DimensionError("InputEnsemble: states of differing dimension");
    projectors_.push_back(s.projector());
  }
}

PureState max_entangled(std::size_t d) {
  if (d < 2) throw InvalidArgument("max_entangled: d must be at least 2");
  ComplexVector a(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t k = 0; k < d; ++k) a[k * d + k] = amp;
  return PureState(std::move(a));
}

PureState singlet() {
  const double h = std::numbers::sqrt2 / 2.0;
  return PureState(ComplexVector{0.0, h, -h, 0.0});
}

ComplexMatrix flip_operator(std::size_t d) {
  if (d < 2) throw InvalidArgument("flip_operator: d must be at least 2");
  ComplexMatrix f(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

DensityMatrix werner_state(std::size_t d, double v) {
  if (d < 2) throw InvalidArgument("werner_state: d must be at least 2");
  const double dd = static_cast<double>(d);
  const double lo = -(dd - 1.0) / (dd + 1.0);
  if (!std::isfinite(v) || v < lo - 1e-12 || v > 1.0 + 1e-12)
    throw InvalidArgument("werner_state: visibility " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", 1]");
  const std::size_t n = d * d;
  ComplexMatrix id = ComplexMatrix::identity(n);
  ComplexMatrix rho = (id - flip_operator(d)) * (v / (dd * (dd - 1.0))) + id * ((1.0 - v) / (dd * dd));
  return DensityMatrix(std::move(rho), d, d);
}

DensityMatrix werner_qubit(double v) {
  if (!std::isfinite(v) || v < -1.0 / 3.0 - 1e-12 || v > 1.0 + 1e-12)
    throw InvalidArgument("werner_qubit: visibility " + std::to_string(v) + " outside [-1/3, 1]");
  ComplexMatrix rho = singlet().projector() * v + ComplexMatrix::identity(4) * ((1.0 - v) / 4.0);
  return DensityMatrix(std::move(rho), 2, 2);
}

PureState bloch_state(const std::array<double, 3>& r) {
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  if (std::abs(len - 1.0) > 1e-12) throw InvalidArgument("bloch_state: Bloch vector must be unit length");
  if (r[2] <= -1.0 + 1e-15) return PureState::basis(2, 1);
  const double a0 = std::sqrt((1.0 + r[2]) / 2.0);
  const Complex a1 = Complex(r[0], r[1]) / std::sqrt(2.0 * (1.0 + r[2]));
  return PureState::normalized(ComplexVector{a0, a1});
}

InputEnsemble tetrahedron_ensemble() {
  const double s = 1.0 / std::sqrt(3.0);
  const std::array<std::array<double, 3>, 4> vertices{{
      {s, s, s},
      {s, -s, -s},
      {-s, s, -s},
      {-s, -s, s},
  }};
  std::vector<PureState> states;
  for (const auto& v : vertices) states.push_back(bloch_state(v));
  return InputEnsemble(std::move(states));
}

InputEnsemble weyl_heisenberg_orbit(const PureState& fiducial) {
  const std::size_t d = fiducial.dim();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<PureState> states;
  states.reserve(d * d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      // (X^p Z^q f)_k = w^{q (k - p)} f_{k - p}
      ComplexVector a(d);
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t src = (k + d - p) % d;
        const double angle = two_pi * static_cast<double>((q * src) % d) / static_cast<double>(d);
        a[k] = std::polar(1.0, angle) * fiducial[src];
      }
      states.push_back(PureState::normalized(std::move(a)));
    }
  return InputEnsemble(std::move(states));
}

double sic_fiducial_defect(std::span<const Complex> f) {
  const std::size_t d = f.size();
  const double target = 1.0 / static_cast<double>(d + 1);
  const double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      if (p == 0 && q == 0) continue;
      Complex s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t src = (k + d - p) % d;
        const double angle = two_pi * static_cast<double>((q * src) % d) / static_cast<double>(d);
        s += std::conj(f[k]) * std::polar(1.0, angle) * f[src];
      }
      const double diff = std::norm(s) - target;
      total += diff * diff;
    }
  // Every displacement appears d^2 times among ordered pairs of orbit elements.
  return total * static_cast<double>(d * d);
}

namespace {

// 2d - 2 angles: d - 1 hyperspherical angles for magnitudes, d - 1 phases.
ComplexVector fiducial_from_angles(std::size_t d, const std::vector<double>& x) {
  ComplexVector a(d);
  double sin_prod = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double mag = k + 1 < d ? sin_prod * std::cos(x[k]) : sin_prod;
    if (k + 1 < d) sin_prod *= std::sin(x[k]);
    const double phase = k == 0 ? 0.0 : x[d - 1 + (k - 1)];
    a[k] = std::polar(mag, phase);
  }
  return a;
}

}  // namespace

PureState search_sic_fiducial(std::size_t d, std::uint64_t seed, const SicSearchOptions& options) {
  if (d < 2) throw InvalidArgument("search_sic_fiducial: d must be at least 2");
  const std::size_t n = 2 * d - 2;
  auto objective = [d](const std::vector<double>& x) {
    const auto f = fiducial_from_angles(d, x);
    return sic_fiducial_defect(f);
  };

  double best_value = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < options.max_restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> polar(0.0, std::numbers::pi / 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < d - 1; ++k) x[k] = polar(rng);
    for (std::size_t k = d - 1; k < n; ++k) x[k] = phase(rng);

    // Repeated simplex runs from the incumbent, shrinking the initial step.
    detail::SimplexResult r{x, objective(x), 0};
    int used = 0;
    double step = 0.5;
    while (used < options.max_evaluations && r.value > options.target) {
      detail::SimplexOptions so;
      so.initial_step = step;
      so.max_evaluations = std::min(4000, options.max_evaluations - used);
      so.target = options.target;
      so.min_spread = 1e-3 * options.target;
      auto next = detail::nelder_mead(objective, r.x, so);
      used += next.evaluations;
      const bool improved = next.value < 0.5 * r.value;
      if (next.value < r.value) r = std::move(next);
      // A local minimum well above zero is not a SIC; move on.
      if (!improved) {
        if (r.value > 1e-6) break;
        step *= 0.1;
        if (step < 1e-12) break;
      }
    }
    best_value = std::min(best_value, r.value);
    if (r.value <= options.target) return PureState::normalized(fiducial_from_angles(d, r.x));
  }
  throw SearchFailed("search_sic_fiducial: d=" + std::to_string(d) + " best objective " +
                     std::to_string(best_value) + " after " + std::to_string(options.max_restarts) +
                     " restarts");
}

InputEnsemble sic_ensemble(std::size_t d, std::uint64_t seed) {
  if (d < 2 || d > 8) throw InvalidArgument("sic_ensemble: d must be in [2, 8]");
  if (d == 2) return tetrahedron_ensemble();
  if (d == 3) {
    const double h = std::numbers::sqrt2 / 2.0;
    return weyl_heisenberg_orbit(PureState(ComplexVector{0.0, h, -h}));
  }
  return weyl_heisenberg_orbit(search_sic_fiducial(d, seed));
}

InputEnsemble computational_basis_ensemble(std::size_t d) {
  std::vector<PureState> states;
  for (std::size_t k = 0; k < d; ++k) states.push_back(PureState::basis(d, k));
  return InputEnsemble(std::move(states));
}

EnsembleDiagnostics ensemble_diagnostics(const InputEnsemble& e) {
  const std::size_t n = e.size();
  // Gram matrices: <phi_s|phi_t> for the vectors, tr(P_s P_t) = |<phi_s|phi_t>|^2
  // for the vectorized projectors.
  ComplexMatrix vec_gram(n, n), proj_gram(n, n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      const Complex ov = inner(e.state(s).amplitudes(), e.state(t).amplitudes());
      vec_gram(s, t) = ov;
      proj_gram(s, t) = std::norm(ov);
    }
  EnsembleDiagnostics out;
  out.informationally_complete = gram_rank(proj_gram) == e.dim() * e.dim();
  out.usd_possible = gram_rank(vec_gram) == n;
  return out;
}

}  // namespace qiw
