#pragma once

// Dense complex linear algebra for small Hilbert spaces (composite dimension
// up to ~64). Bipartite operators use the product basis |i>_A (x) |k>_B with
// flat index i * dimB + k throughout.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qiw/errors.hpp"

namespace qiw {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kDefaultTol = 1e-9;

enum class Subsystem { A, B };

// Dense row-major real matrix; carries witness coefficients and P(1,1|s,t)
// tables.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  std::span<double> data() { return entries_; }
  std::span<const double> data() const { return entries_; }

  bool operator==(const RealMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(std::span<const double> values);
  // |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
  static ComplexMatrix projector(std::span<const Complex> u) { return outer(u, u); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return entries_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<Complex> data() { return entries_; }
  std::span<const Complex> data() const { return entries_; }

  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  ComplexMatrix adjoint() const;
  Complex trace() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

// <u|v>, conjugating u.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);
double norm2(std::span<const Complex> v);
ComplexVector kron(std::span<const Complex> u, std::span<const Complex> v);

// Largest entrywise |a - b|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// tr(A * B) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                                Subsystem subsystem);

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dimA, std::size_t dimB,
                            Subsystem keep);

// max_ij |H_ij - conj(H_ji)|
double hermiticity_defect(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double tol = kDefaultTol);

struct HermitianEigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column j pairs with eigenvalues[j]

  ComplexVector eigenvector(std::size_t j) const;
};

// Cyclic Jacobi diagonalization. Throws NotHermitian when the input is not
// Hermitian within tol.
HermitianEigenResult eig_hermitian(const ComplexMatrix& h, double tol = kDefaultTol);

// Solves A x = b by LU with partial pivoting. Throws Singular when a pivot
// falls below 1e-12 * max|A_ij|.
ComplexVector solve_linear(const ComplexMatrix& a, std::span<const Complex> b);

bool is_psd(const ComplexMatrix& h, double tol = kDefaultTol);

// Number of eigenvalues of the Hermitian PSD matrix g above
// rel_tol * max eigenvalue. Used on Gram matrices.
std::size_t gram_rank(const ComplexMatrix& g, double rel_tol = 1e-10);

// Largest eigenvalue of a Hermitian matrix.
double spectral_max(const ComplexMatrix& h);

// Applies f to the eigenvalues of a Hermitian matrix: V f(D) V^dagger.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f, double tol = kDefaultTol) {
  const auto eig = eig_hermitian(h, tol);
  const std::size_t n = h.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = eig.eigenvectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.eigenvectors(j, k));
    }
  }
  return out;
}

namespace serial {
// Single-threaded reference of solve_linear; kept for testing and benchmarks.
ComplexVector solve_linear(const ComplexMatrix& a, std::span<const Complex> b);
}  // namespace serial

}  // namespace qiw
