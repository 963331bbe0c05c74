#include "qiw/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qiw {

namespace {

void validate_povm(const BinaryPovm& povm, std::size_t dim, const char* who, double tol) {
  ComplexMatrix sum = ComplexMatrix::zeros(dim, dim);
  for (const auto& e : povm) {
    if (e.rows() != dim || e.cols() != dim)
      throw DimensionError(std::string(who) + ": POVM element is not " + std::to_string(dim) + "x" +
                           std::to_string(dim));
    if (!is_psd(e, tol)) throw InvalidArgument(std::string(who) + ": POVM element is not PSD");
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(dim)) > tol)
    throw InvalidArgument(std::string(who) + ": POVM elements do not sum to identity");
}

struct EffectivePovms {
  std::vector<BinaryPovm> alice;  // per s
  std::vector<BinaryPovm> bob;    // per t
};

EffectivePovms effective_povms(const QIScenario& sc) {
  EffectivePovms out;
  out.alice.reserve(sc.ensembleA().size());
  for (const auto& phi : sc.ensembleA().states())
    out.alice.push_back({effective_povm(sc.povmA()[0], phi, Subsystem::A),
                         effective_povm(sc.povmA()[1], phi, Subsystem::A)});
  out.bob.reserve(sc.ensembleB().size());
  for (const auto& psi : sc.ensembleB().states())
    out.bob.push_back({effective_povm(sc.povmB()[0], psi, Subsystem::B),
                       effective_povm(sc.povmB()[1], psi, Subsystem::B)});
  return out;
}

void fill_entry(CorrelationTable& table, const EffectivePovms& eff, const ComplexMatrix& rho,
                std::size_t s, std::size_t t) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) table(a, b, s, t) = product_expectation(eff.alice[s][a], eff.bob[t][b], rho);
}

}  // namespace

QIScenario::QIScenario(DensityMatrix rho, InputEnsemble ensembleA, InputEnsemble ensembleB,
                       BinaryPovm povmA, BinaryPovm povmB, double tol)
    : rho_(std::move(rho)),
      ensembleA_(std::move(ensembleA)),
      ensembleB_(std::move(ensembleB)),
      povmA_(std::move(povmA)),
      povmB_(std::move(povmB)) {
  if (ensembleA_.dim() != rho_.dimA())
    throw DimensionError("QIScenario: ensemble A has dimension " + std::to_string(ensembleA_.dim()) +
                         ", state has dimA " + std::to_string(rho_.dimA()));
  if (ensembleB_.dim() != rho_.dimB())
    throw DimensionError("QIScenario: ensemble B has dimension " + std::to_string(ensembleB_.dim()) +
                         ", state has dimB " + std::to_string(rho_.dimB()));
  validate_povm(povmA_, rho_.dimA() * rho_.dimA(), "QIScenario povmA", tol);
  validate_povm(povmB_, rho_.dimB() * rho_.dimB(), "QIScenario povmB", tol);
}

CorrelationTable::CorrelationTable(std::size_t nS, std::size_t nT) : nS_(nS), nT_(nT), p_(4 * nS * nT) {}

double CorrelationTable::normalization_defect() const {
  double worst = 0.0;
  for (std::size_t s = 0; s < nS_; ++s)
    for (std::size_t t = 0; t < nT_; ++t) {
      double sum = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) sum += (*this)(a, b, s, t);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  return worst;
}

double CorrelationTable::min_entry() const {
  return p_.empty() ? 0.0 : *std::min_element(p_.begin(), p_.end());
}

BinaryPovm bell_state_povm(std::size_t d) {
  ComplexMatrix hit = max_entangled(d).projector();
  ComplexMatrix miss = ComplexMatrix::identity(d * d) - hit;
  return {std::move(miss), std::move(hit)};
}

QIScenario canonical_scenario(const DensityMatrix& rho, const InputEnsemble& eA, const InputEnsemble& eB) {
  if (eA.dim() != rho.dimA() || eB.dim() != rho.dimB())
    throw DimensionError("canonical_scenario: ensemble dimensions (" + std::to_string(eA.dim()) + ", " +
                         std::to_string(eB.dim()) + ") do not match state (" + std::to_string(rho.dimA()) +
                         ", " + std::to_string(rho.dimB()) + ")");
  return QIScenario(rho, eA, eB, bell_state_povm(rho.dimA()), bell_state_povm(rho.dimB()));
}

ComplexMatrix effective_povm(const ComplexMatrix& element, const PureState& input, Subsystem side) {
  const std::size_t din = input.dim();
  if (!element.square() || element.rows() % din != 0)
    throw DimensionError("effective_povm: element of size " + std::to_string(element.rows()) +
                         " is incompatible with input dimension " + std::to_string(din));
  const std::size_t d = element.rows() / din;
  ComplexMatrix out(d, d);
  if (side == Subsystem::A) {
    // element indices (i' * d + i, j' * d + j), input on the primed slot
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Complex acc = 0.0;
        for (std::size_t ip = 0; ip < din; ++ip)
          for (std::size_t jp = 0; jp < din; ++jp)
            acc += std::conj(input[ip]) * element(ip * d + i, jp * d + j) * input[jp];
        out(i, j) = acc;
      }
  } else {
    // element indices (k * din + k', l * din + l')
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l) {
        Complex acc = 0.0;
        for (std::size_t kp = 0; kp < din; ++kp)
          for (std::size_t lp = 0; lp < din; ++lp)
            acc += std::conj(input[kp]) * element(k * din + kp, l * din + lp) * input[lp];
        out(k, l) = acc;
      }
  }
  return out;
}

double product_expectation(const ComplexMatrix& x, const ComplexMatrix& y, const ComplexMatrix& rho) {
  const std::size_t dA = x.rows(), dB = y.rows();
  if (!x.square() || !y.square() || rho.rows() != dA * dB || !rho.square())
    throw DimensionError("product_expectation: shape mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < dA; ++i)
    for (std::size_t j = 0; j < dA; ++j) {
      const Complex xij = x(i, j);
      if (xij == Complex{}) continue;
      Complex inner_sum = 0.0;
      for (std::size_t k = 0; k < dB; ++k)
        for (std::size_t l = 0; l < dB; ++l) inner_sum += y(k, l) * rho(j * dB + l, i * dB + k);
      acc += xij * inner_sum;
    }
  return acc.real();
}

CorrelationTable correlations(const QIScenario& sc) {
  const EffectivePovms eff = effective_povms(sc);
  const std::size_t nS = sc.ensembleA().size(), nT = sc.ensembleB().size();
  CorrelationTable table(nS, nT);
  const auto& rho = sc.rho().matrix();
  const auto total = static_cast<std::ptrdiff_t>(nS * nT);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t st = 0; st < total; ++st) {
    const auto s = static_cast<std::size_t>(st) / nT, t = static_cast<std::size_t>(st) % nT;
    fill_entry(table, eff, rho, s, t);
  }
  return table;
}

namespace serial {

CorrelationTable correlations(const QIScenario& sc) {
  const EffectivePovms eff = effective_povms(sc);
  CorrelationTable table(sc.ensembleA().size(), sc.ensembleB().size());
  for (std::size_t s = 0; s < table.nS(); ++s)
    for (std::size_t t = 0; t < table.nT(); ++t) fill_entry(table, eff, sc.rho().matrix(), s, t);
  return table;
}

}  // namespace serial

double closed_form_correlations(const ClosedFormModel& model, int a, int b, std::size_t s, std::size_t t) {
  if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw InvalidArgument("closed_form_correlations: outcome out of range");
  const std::size_t d = model.kind == ClosedFormKind::WernerD ? model.d : 2;
  if (d < 2) throw InvalidArgument("closed_form_correlations: d must be at least 2");
  if (s >= d * d || t >= d * d) throw InvalidArgument("closed_form_correlations: input index out of range");
  const double dd = static_cast<double>(d);
  const double v = model.v;
  const double lo = -(dd - 1.0) / (dd + 1.0);
  if (model.kind != ClosedFormKind::Singlet && (!std::isfinite(v) || v < lo - 1e-12 || v > 1.0 + 1e-12))
    throw InvalidArgument("closed_form_correlations: visibility out of range");

  const bool same = s == t;
  auto singlet_value = [&]() {
    return same ? (2.0 - (a + b)) / 4.0 : (7.0 - 5.0 * a - 5.0 * b + 4.0 * a * b) / 12.0;
  };
  switch (model.kind) {
    case ClosedFormKind::Singlet:
      return singlet_value();
    case ClosedFormKind::WernerQubit: {
      const double noise = (3.0 - 2.0 * a) * (3.0 - 2.0 * b) / 16.0;
      return v * singlet_value() + (1.0 - v) * noise;
    }
    case ClosedFormKind::WernerD: {
      const double d2 = dd * dd;
      const double sign = (a + b) % 2 == 0 ? 1.0 : -1.0;
      const double delta = same ? 1.0 : 0.0;
      return (std::pow(d2 - 1.0, 3 - a - b) + sign * (1.0 - d2 * delta) * v) / (d2 * d2 * (d2 - 1.0));
    }
  }
  return 0.0;
}

}  // namespace qiw
