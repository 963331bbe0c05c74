#include "qiw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qiw {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.square())
    throw DimensionError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_bipartite(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                       const char* what) {
  require_square(m, what);
  if (dimA == 0 || dimB == 0 || m.rows() != dimA * dimB)
    throw DimensionError(std::string(what) + ": matrix of size " + std::to_string(m.rows()) +
                         " is not " + std::to_string(dimA) + "x" + std::to_string(dimB));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw DimensionError("ComplexMatrix: " + std::to_string(entries_.size()) +
                         " entries for shape " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix c = *this;
  for (auto& z : c.entries_) z = std::conj(z);
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix add: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sub: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionError("matrix product: inner dimensions differ");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) throw DimensionError("matrix-vector product: size mismatch");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw DimensionError("inner: size mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm2(std::span<const Complex> v) { return std::sqrt(std::real(inner(v, v))); }

ComplexVector kron(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexVector out;
  out.reserve(u.size() * v.size());
  for (const auto& a : u)
    for (const auto& b : v) out.push_back(a * b);
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: shape mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rb = b.rows(), cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                                Subsystem subsystem) {
  require_bipartite(m, dimA, dimB, "partial_transpose");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < dimA; ++i)
    for (std::size_t k = 0; k < dimB; ++k)
      for (std::size_t j = 0; j < dimA; ++j)
        for (std::size_t l = 0; l < dimB; ++l) {
          const Complex v = m(i * dimB + k, j * dimB + l);
          if (subsystem == Subsystem::B)
            out(i * dimB + l, j * dimB + k) = v;
          else
            out(j * dimB + k, i * dimB + l) = v;
        }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep) {
  require_bipartite(m, dimA, dimB, "partial_trace");
  if (keep == Subsystem::A) {
    ComplexMatrix out(dimA, dimA);
    for (std::size_t i = 0; i < dimA; ++i)
      for (std::size_t j = 0; j < dimA; ++j)
        for (std::size_t k = 0; k < dimB; ++k) out(i, j) += m(i * dimB + k, j * dimB + k);
    return out;
  }
  ComplexMatrix out(dimB, dimB);
  for (std::size_t k = 0; k < dimB; ++k)
    for (std::size_t l = 0; l < dimB; ++l)
      for (std::size_t i = 0; i < dimA; ++i) out(k, l) += m(i * dimB + k, i * dimB + l);
  return out;
}

double hermiticity_defect(const ComplexMatrix& h) {
  require_square(h, "hermiticity_defect");
  double d = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j) d = std::max(d, std::abs(h(i, j) - std::conj(h(j, i))));
  return d;
}

bool is_hermitian(const ComplexMatrix& h, double tol) {
  return h.square() && hermiticity_defect(h) <= tol;
}

ComplexVector HermitianEigenResult::eigenvector(std::size_t j) const {
  ComplexVector v(eigenvectors.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, j);
  return v;
}

HermitianEigenResult eig_hermitian(const ComplexMatrix& input, double tol) {
  require_square(input, "eig_hermitian");
  if (!input.all_finite()) throw InvalidArgument("eig_hermitian: non-finite entry");
  const double defect = hermiticity_defect(input);
  if (defect > tol)
    throw NotHermitian("eig_hermitian: max |H - H^dagger| = " + std::to_string(defect));

  const std::size_t n = input.rows();
  // Work on the exactly Hermitian part.
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = input(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (input(i, j) + std::conj(input(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double stop = 1e-12 * std::max(1.0, h.frobenius_norm());
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * std::norm(h(p, q));
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex hpq = h(p, q);
        const double mag = std::abs(hpq);
        if (mag == 0.0) continue;
        // Phase-reduce to a real symmetric 2x2 block, then rotate.
        const Complex phase = hpq / mag;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * mag);
        const double t = tau == 0.0 ? 1.0
                                    : std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J restricted to (p,q): [[c, s], [-s e^{-ia}, c e^{-ia}]]
        const Complex jpp = c, jpq = s;
        const Complex jqp = -s * std::conj(phase), jqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex hkp = h(k, p), hkq = h(k, q);
          h(k, p) = hkp * jpp + hkq * jqp;
          h(k, q) = hkp * jpq + hkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex hpk = h(p, k), hqk = h(q, k);
          h(p, k) = std::conj(jpp) * hpk + std::conj(jqp) * hqk;
          h(q, k) = std::conj(jpq) * hpk + std::conj(jqq) * hqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = h(p, p).real();
        h(q, q) = h(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return h(a, a).real() < h(b, b).real(); });

  HermitianEigenResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    result.eigenvalues[j] = h(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) result.eigenvectors(i, j) = v(i, order[j]);
  }
  return result;
}

namespace {

struct LuSystem {
  ComplexMatrix a;
  ComplexVector x;
  double threshold;
};

LuSystem prepare_lu(const ComplexMatrix& a, std::span<const Complex> b) {
  require_square(a, "solve_linear");
  if (b.size() != a.rows()) throw DimensionError("solve_linear: right-hand side size mismatch");
  if (a.rows() == 0) throw DimensionError("solve_linear: empty system");
  return {a, ComplexVector(b.begin(), b.end()), 1e-12 * a.max_abs()};
}

std::size_t select_pivot(LuSystem& sys, std::size_t k) {
  const std::size_t n = sys.a.rows();
  std::size_t piv = k;
  double best = std::abs(sys.a(k, k));
  for (std::size_t i = k + 1; i < n; ++i) {
    const double mag = std::abs(sys.a(i, k));
    if (mag > best) {
      best = mag;
      piv = i;
    }
  }
  if (!(best >= sys.threshold) || best == 0.0)
    throw Singular("solve_linear: pivot " + std::to_string(best) + " below threshold at column " +
                   std::to_string(k));
  if (piv != k) {
    for (std::size_t j = 0; j < n; ++j) std::swap(sys.a(k, j), sys.a(piv, j));
    std::swap(sys.x[k], sys.x[piv]);
  }
  return piv;
}

ComplexVector back_substitute(LuSystem& sys) {
  const std::size_t n = sys.a.rows();
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = sys.x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= sys.a(ii, j) * sys.x[j];
    sys.x[ii] = s / sys.a(ii, ii);
  }
  return std::move(sys.x);
}

}  // namespace

ComplexVector solve_linear(const ComplexMatrix& a, std::span<const Complex> b) {
  LuSystem sys = prepare_lu(a, b);
  const auto n = static_cast<std::ptrdiff_t>(sys.a.rows());
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    select_pivot(sys, static_cast<std::size_t>(k));
    const Complex pivot = sys.a(k, k);
    // Row updates below the pivot are independent.
#pragma omp parallel for schedule(static) if (n - k > 64)
    for (std::ptrdiff_t i = k + 1; i < n; ++i) {
      const Complex factor = sys.a(i, k) / pivot;
      if (factor == Complex{}) continue;
      sys.a(i, k) = 0.0;
      for (std::ptrdiff_t j = k + 1; j < n; ++j) sys.a(i, j) -= factor * sys.a(k, j);
      sys.x[i] -= factor * sys.x[k];
    }
  }
  return back_substitute(sys);
}

namespace serial {

ComplexVector solve_linear(const ComplexMatrix& a, std::span<const Complex> b) {
  LuSystem sys = prepare_lu(a, b);
  const std::size_t n = sys.a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    select_pivot(sys, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = sys.a(i, k) / sys.a(k, k);
      if (factor == Complex{}) continue;
      sys.a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) sys.a(i, j) -= factor * sys.a(k, j);
      sys.x[i] -= factor * sys.x[k];
    }
  }
  return back_substitute(sys);
}

}  // namespace serial

bool is_psd(const ComplexMatrix& h, double tol) {
  const auto eig = eig_hermitian(h, tol);
  return eig.eigenvalues.empty() || eig.eigenvalues.front() >= -tol;
}

std::size_t gram_rank(const ComplexMatrix& g, double rel_tol) {
  const auto eig = eig_hermitian(g, 1e-8 * std::max(1.0, g.max_abs()));
  if (eig.eigenvalues.empty()) return 0;
  const double top = eig.eigenvalues.back();
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                                                [&](double l) { return l > rel_tol * top; }));
}

double spectral_max(const ComplexMatrix& h) {
  const auto eig = eig_hermitian(h, 1e-8 * std::max(1.0, h.max_abs()));
  return eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
}

}  // namespace qiw
