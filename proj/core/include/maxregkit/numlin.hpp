#pragma once

// Dense complex linear algebra for small matrices (n <= 64).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace maxregkit {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-wise literal, e.g. CMatrix{{1, 2}, {3, 4}}. Rows must have equal length.
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols);
  static CMatrix diagonal(std::span<const Complex> diag);
  static CMatrix diagonal(std::initializer_list<Complex> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Complex> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Complex* data() noexcept { return data_.data(); }
  const Complex* data() const noexcept { return data_.data(); }
  const std::vector<Complex>& entries() const noexcept { return data_; }

  bool all_finite() const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(CMatrix a, Complex s);

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CVector matvec(const CMatrix& a, std::span<const Complex> x);

/// Conjugate transpose.
CMatrix adjoint(const CMatrix& a);

/// Solves a * X = rhs by LU with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below 1e-13 times the
/// largest row norm of `a`.
CMatrix solve(const CMatrix& a, const CMatrix& rhs);
CVector solve(const CMatrix& a, std::span<const Complex> rhs);
CMatrix inverse(const CMatrix& a);

/// LU factorization with partial pivoting, reusable for several right-hand sides.
class LuFactorization {
 public:
  explicit LuFactorization(const CMatrix& a);

  std::size_t size() const noexcept { return lu_.rows(); }
  CMatrix solve(const CMatrix& rhs) const;
  void solve_in_place(std::span<Complex> rhs) const;
  Complex determinant() const;

 private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
};

Complex trace(const CMatrix& a);
Complex determinant(const CMatrix& a);

double frob_norm(const CMatrix& a);
double norm1(const CMatrix& a);
double vec_norm(std::span<const Complex> x);

/// Spectral norm: sqrt of the largest eigenvalue of a^* a.
double op_norm2(const CMatrix& a);

/// ||a - a^*||_F relative to ||a||_F (0 for the zero matrix).
double hermitian_defect(const CMatrix& a);

struct EigenDecomposition {
  std::vector<Complex> eigenvalues;
  /// Eigenvectors as columns; empty when the method does not produce them.
  CMatrix eigenvectors;

  bool has_eigenvectors() const noexcept { return !eigenvectors.empty(); }
};

/// Cyclic Jacobi eigensolver. Eigenvalues are real (stored with zero
/// imaginary part) and ascending; eigenvectors are orthonormal columns.
EigenDecomposition eig_hermitian(const CMatrix& a);

/// Eigenvalues of a general square matrix via Hessenberg reduction and
/// shifted complex QR iteration. No eigenvectors.
EigenDecomposition eig_general(const CMatrix& a);

double spectral_radius(std::span<const Complex> eigenvalues);

}  // namespace maxregkit
