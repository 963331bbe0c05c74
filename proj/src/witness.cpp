#include "qiw/witness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qiw {

namespace {

// Rotates the global phase so the first non-negligible amplitude is real positive.
ComplexVector canonical_phase(ComplexVector v) {
  for (const auto& a : v) {
    const double mag = std::abs(a);
    if (mag > 1e-12) {
      const Complex rot = std::conj(a) / mag;
      for (auto& x : v) x *= rot;
      break;
    }
  }
  return v;
}

// Lexicographic comparison on (re, im) with a small dead band.
bool lex_greater(const ComplexVector& a, const ComplexVector& b) {
  constexpr double eps = 1e-12;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() > b[i].real() + eps) return true;
    if (a[i].real() < b[i].real() - eps) return false;
    if (a[i].imag() > b[i].imag() + eps) return true;
    if (a[i].imag() < b[i].imag() - eps) return false;
  }
  return false;
}

}  // namespace

PositiveMapSpec PositiveMapSpec::transposition(std::size_t d) {
  if (d < 1) throw InvalidArgument("transposition map: d must be positive");
  return PositiveMapSpec(MapKind::Transposition, d, d, std::nullopt);
}

PositiveMapSpec PositiveMapSpec::choi(ComplexMatrix matrix, std::size_t dimIn, std::size_t dimOut, double tol) {
  if (dimIn == 0 || dimOut == 0 || !matrix.square() || matrix.rows() != dimIn * dimOut)
    throw DimensionError("choi map: matrix size " + std::to_string(matrix.rows()) + " is not " +
                         std::to_string(dimIn) + "*" + std::to_string(dimOut));
  if (!matrix.all_finite()) throw InvalidArgument("choi map: non-finite entry");
  if (!is_hermitian(matrix, tol)) throw NotHermitian("choi map: Choi matrix is not Hermitian");
  return PositiveMapSpec(MapKind::Choi, dimIn, dimOut, std::move(matrix));
}

ComplexMatrix transposition_choi(std::size_t d) {
  ComplexMatrix c(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c(i * d + j, j * d + i) = 1.0;
  return c;
}

ComplexMatrix apply_map(const PositiveMapSpec& map, const ComplexMatrix& x, bool dual) {
  const std::size_t din = dual ? map.output_dim() : map.input_dim();
  const std::size_t dout = dual ? map.input_dim() : map.output_dim();
  if (!x.square() || x.rows() != din)
    throw DimensionError("apply_map: operand is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                         ", map expects " + std::to_string(din));
  if (map.kind() == MapKind::Transposition) return x.transpose();

  const ComplexMatrix& c = *map.choi_matrix();
  const std::size_t dIn = map.input_dim(), dOut = map.output_dim();
  ComplexMatrix out(dout, dout);
  if (!dual) {
    // Lambda(X)_kl = sum_mi X_mi C[(m,k),(i,l)]
    for (std::size_t m = 0; m < dIn; ++m)
      for (std::size_t i = 0; i < dIn; ++i) {
        const Complex xmi = x(m, i);
        if (xmi == Complex{}) continue;
        for (std::size_t k = 0; k < dOut; ++k)
          for (std::size_t l = 0; l < dOut; ++l) out(k, l) += xmi * c(m * dOut + k, i * dOut + l);
      }
  } else {
    // Lambda*(N)_ji = sum_kl C[(i,k),(j,l)] N_lk
    for (std::size_t i = 0; i < dIn; ++i)
      for (std::size_t j = 0; j < dIn; ++j) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < dOut; ++k)
          for (std::size_t l = 0; l < dOut; ++l) acc += c(i * dOut + k, j * dOut + l) * x(l, k);
        out(j, i) = acc;
      }
  }
  return out;
}

ComplexMatrix apply_map_on_b(const PositiveMapSpec& map, const ComplexMatrix& m, std::size_t dimA, bool dual) {
  const std::size_t din = dual ? map.output_dim() : map.input_dim();
  const std::size_t dout = dual ? map.input_dim() : map.output_dim();
  if (!m.square() || dimA == 0 || m.rows() != dimA * din)
    throw DimensionError("apply_map_on_b: operator of size " + std::to_string(m.rows()) + " is not " +
                         std::to_string(dimA) + "*" + std::to_string(din));
  ComplexMatrix out(dimA * dout, dimA * dout);
  ComplexMatrix block(din, din);
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t j = 0; j < dimA; ++j) {
      for (std::size_t k = 0; k < din; ++k)
        for (std::size_t l = 0; l < din; ++l) block(k, l) = m(i * din + k, j * din + l);
      const ComplexMatrix mapped = apply_map(map, block, dual);
      for (std::size_t k = 0; k < dout; ++k)
        for (std::size_t l = 0; l < dout; ++l) out(i * dout + k, j * dout + l) = mapped(k, l);
    }
  return out;
}

NegativeEigenstate negative_eigenstate(const DensityMatrix& rho, const PositiveMapSpec& map) {
  if (map.input_dim() != rho.dimB())
    throw DimensionError("negative_eigenstate: map input dimension " + std::to_string(map.input_dim()) +
                         " differs from dimB " + std::to_string(rho.dimB()));
  const ComplexMatrix mapped = apply_map_on_b(map, rho.matrix(), rho.dimA());
  const auto eig = eig_hermitian(mapped);
  const double lowest = eig.eigenvalues.front();
  if (lowest >= -1e-10) {
    const std::string what = map.kind() == MapKind::Transposition
                                 ? "the partial transpose is positive (PPT state), so the transposition map "
                                   "does not detect it"
                                 : "the map does not detect this state";
    throw NoNegativeEigenvalue("no negative eigenvalue: minimum eigenvalue " + std::to_string(lowest) + "; " +
                               what);
  }

  ComplexVector best = canonical_phase(eig.eigenvector(0));
  for (std::size_t j = 1; j < eig.eigenvalues.size() && eig.eigenvalues[j] <= lowest + 1e-10; ++j) {
    ComplexVector cand = canonical_phase(eig.eigenvector(j));
    if (lex_greater(cand, best)) best = std::move(cand);
  }
  return {lowest, PureState::normalized(std::move(best))};
}

WitnessCoefficients build_coefficients(const PureState& xi, double lambda, const PositiveMapSpec& map,
                                       const InputEnsemble& eA, const InputEnsemble& eB) {
  const std::size_t dA = eA.dim(), dB = eB.dim();
  if (map.input_dim() != dB)
    throw DimensionError("build_coefficients: map input dimension " + std::to_string(map.input_dim()) +
                         " differs from ensemble B dimension " + std::to_string(dB));
  if (xi.dim() != dA * map.output_dim())
    throw DimensionError("build_coefficients: xi has dimension " + std::to_string(xi.dim()) + ", expected " +
                         std::to_string(dA * map.output_dim()));
  if (eA.size() != dA * dA || eB.size() != dB * dB)
    throw NotInformationallyComplete("build_coefficients: ensembles must hold exactly d^2 states (got " +
                                     std::to_string(eA.size()) + " and " + std::to_string(eB.size()) + ")");

  const ComplexMatrix target = apply_map_on_b(map, xi.projector(), dA, /*dual=*/true);
  const std::size_t dim = dA * dB;
  const std::size_t nS = eA.size(), nT = eB.size();
  const std::size_t unknowns = nS * nT;

  // Column (s, t) holds vec(phi_s^T (x) psi_t^T); row (r, c) is entry (r, c).
  ComplexMatrix system(dim * dim, unknowns);
  for (std::size_t s = 0; s < nS; ++s) {
    const ComplexMatrix pa = eA.projector(s).transpose();
    for (std::size_t t = 0; t < nT; ++t) {
      const ComplexMatrix pb = eB.projector(t).transpose();
      const std::size_t col = s * nT + t;
      for (std::size_t i = 0; i < dA; ++i)
        for (std::size_t j = 0; j < dA; ++j) {
          const Complex aij = pa(i, j);
          for (std::size_t k = 0; k < dB; ++k)
            for (std::size_t l = 0; l < dB; ++l)
              system((i * dB + k) * dim + (j * dB + l), col) = aij * pb(k, l);
        }
    }
  }

  ComplexVector solution;
  try {
    solution = solve_linear(system, target.data());
  } catch (const Singular& e) {
    throw NotInformationallyComplete(std::string("build_coefficients: input projectors do not span the "
                                                 "operator space (") +
                                     e.what() + ")");
  }

  WitnessCoefficients w;
  w.beta = RealMatrix(nS, nT);
  double worst_imag = 0.0;
  for (std::size_t s = 0; s < nS; ++s)
    for (std::size_t t = 0; t < nT; ++t) {
      const Complex b = solution[s * nT + t];
      worst_imag = std::max(worst_imag, std::abs(b.imag()));
      w.beta(s, t) = b.real();
    }
  if (worst_imag > 1e-8)
    throw Error("build_coefficients: solved coefficients have imaginary part " + std::to_string(worst_imag));
  w.lambda = lambda;
  w.xi = xi;
  w.map = map;
  w.ensembleA = eA;
  w.ensembleB = eB;

  const double defect = reconstruction_defect(w);
  if (defect > 1e-8)
    throw Error("build_coefficients: reconstruction defect " + std::to_string(defect) + " exceeds 1e-8");
  return w;
}

WitnessCoefficients build_witness(const DensityMatrix& rho, const PositiveMapSpec& map, const InputEnsemble& eA,
                                  const InputEnsemble& eB) {
  const auto neg = negative_eigenstate(rho, map);
  return build_coefficients(neg.xi, neg.lambda, map, eA, eB);
}

ComplexMatrix witness_operator(const WitnessCoefficients& w) {
  const std::size_t dA = w.dimA(), dB = w.dimB();
  ComplexMatrix out(dA * dB, dA * dB);
  for (std::size_t s = 0; s < w.beta.rows(); ++s) {
    const ComplexMatrix pa = w.ensembleA.projector(s).transpose();
    for (std::size_t t = 0; t < w.beta.cols(); ++t)
      out += kron(pa, w.ensembleB.projector(t).transpose()) * w.beta(s, t);
  }
  return out;
}

double reconstruction_defect(const WitnessCoefficients& w) {
  const ComplexMatrix target = apply_map_on_b(w.map, w.xi.projector(), w.dimA(), /*dual=*/true);
  return max_abs_diff(witness_operator(w), target);
}

double evaluate_inequality(const RealMatrix& beta, const RealMatrix& p11) {
  if (beta.rows() != p11.rows() || beta.cols() != p11.cols())
    throw DimensionError("evaluate_inequality: coefficients are " + std::to_string(beta.rows()) + "x" +
                         std::to_string(beta.cols()) + ", table is " + std::to_string(p11.rows()) + "x" +
                         std::to_string(p11.cols()));
  double sum = 0.0;
  for (std::size_t k = 0; k < beta.data().size(); ++k) sum += beta.data()[k] * p11.data()[k];
  return sum;
}

double evaluate_inequality(const WitnessCoefficients& w, const CorrelationTable& table) {
  return evaluate_inequality(w.beta, p11_slice(table));
}

double predicted_quantum_value(const WitnessCoefficients& w, std::size_t dimA, std::size_t dimB) {
  return w.lambda / static_cast<double>(dimA * dimB);
}

RealMatrix werner_beta_closed_form(std::size_t d) {
  if (d < 2) throw InvalidArgument("werner_beta_closed_form: d must be at least 2");
  const double dd = static_cast<double>(d);
  const std::size_t n = d * d;
  RealMatrix beta(n, n, -1.0 / (dd * dd * dd));
  for (std::size_t s = 0; s < n; ++s) beta(s, s) = (dd * (dd + 1.0) - 1.0) / (dd * dd * dd);
  return beta;
}

RealMatrix p11_slice(const CorrelationTable& table) {
  RealMatrix p(table.nS(), table.nT());
  for (std::size_t s = 0; s < table.nS(); ++s)
    for (std::size_t t = 0; t < table.nT(); ++t) p(s, t) = table(1, 1, s, t);
  return p;
}

}  // namespace qiw
