#include "maxregkit/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxregkit/errors.hpp"

namespace maxregkit {

namespace {

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

// ---- errors ---------------------------------------------------------------

SingularMatrixError::SingularMatrixError(std::size_t pivot_index, double pivot_magnitude)
    : Error("singular matrix: pivot " + std::to_string(pivot_index) + " has magnitude " +
            std::to_string(pivot_magnitude)),
      pivot_index_(pivot_index),
      pivot_magnitude_(pivot_magnitude) {}

NotHermitianError::NotHermitianError(double relative_defect)
    : Error("matrix is not Hermitian: relative defect " + std::to_string(relative_defect)),
      relative_defect_(relative_defect) {}

ConvergenceError::ConvergenceError(const std::string& what, int iteration_cap)
    : Error(what + " did not converge within " + std::to_string(iteration_cap) + " iterations"),
      iteration_cap_(iteration_cap) {}

NotStableError::NotStableError(std::complex<double> eigenvalue)
    : ValidationError("generator is not stable: eigenvalue " + format_complex(eigenvalue) +
                      " has non-positive real part"),
      eigenvalue_(eigenvalue) {}

NotSectorialError::NotSectorialError(std::complex<double> eigenvalue, double angle)
    : ValidationError("generator is not sectorial: eigenvalue " + format_complex(eigenvalue) +
                      " has |arg| = " + std::to_string(angle)),
      eigenvalue_(eigenvalue),
      angle_(angle) {}

NotBisectorialError::NotBisectorialError(std::complex<double> eigenvalue)
    : ValidationError("matrix is not bisectorial: eigenvalue " + format_complex(eigenvalue) +
                      " is too close to the imaginary axis"),
      eigenvalue_(eigenvalue) {}

NoValidContourError::NoValidContourError(std::complex<double> blocking_point)
    : ValidationError("no admissible circular contour: blocked by " +
                      format_complex(blocking_point)),
      blocking_point_(blocking_point) {}

// ---- CMatrix --------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("CMatrix: entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw ArgumentError("CMatrix: entries must be finite");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, Complex s) { return a *= s; }

// ---- products -------------------------------------------------------------

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
  }
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

CVector matvec(const CMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: dimension mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    auto ai = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) acc += ai[j] * x[j];
    y[i] = acc;
  }
  return y;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

// ---- LU ---------------------------------------------------------------------

LuFactorization::LuFactorization(const CMatrix& a) : lu_(a), perm_(a.rows()) {
  if (!a.is_square()) throw DimensionError("LU: matrix must be square");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  double max_row_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_row_norm = std::max(max_row_norm, vec_norm(a.row(i)));
  const double threshold = 1e-13 * max_row_norm;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > threshold)) throw SingularMatrixError(k, best);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const Complex pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex factor = lu_(i, k) / pivot;
      lu_(i, k) = factor;
      if (factor == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
    }
  }
}

void LuFactorization::solve_in_place(std::span<Complex> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw DimensionError("LU solve: rhs length mismatch");
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc / lu_(i, i);
  }
  std::copy(x.begin(), x.end(), rhs.begin());
}

CMatrix LuFactorization::solve(const CMatrix& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.rows() != n) throw DimensionError("solve: rhs has wrong number of rows");
  CMatrix x(n, rhs.cols());
  CVector column(n);
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rhs(i, c);
    solve_in_place(column);
    for (std::size_t i = 0; i < n; ++i) x(i, c) = column[i];
  }
  return x;
}

Complex LuFactorization::determinant() const {
  Complex det = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
  return det;
}

CMatrix solve(const CMatrix& a, const CMatrix& rhs) { return LuFactorization(a).solve(rhs); }

CVector solve(const CMatrix& a, std::span<const Complex> rhs) {
  CVector x(rhs.begin(), rhs.end());
  LuFactorization(a).solve_in_place(x);
  return x;
}

CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

Complex trace(const CMatrix& a) {
  if (!a.is_square()) throw DimensionError("trace: matrix must be square");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

Complex determinant(const CMatrix& a) {
  try {
    return LuFactorization(a).determinant();
  } catch (const SingularMatrixError&) {
    return Complex{};
  }
}

// ---- norms -----------------------------------------------------------------

double frob_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double norm1(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double vec_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

double op_norm2(const CMatrix& a) {
  if (a.empty()) return 0.0;
  CMatrix gram = matmul(adjoint(a), a);
  // Symmetrize so rounding never trips the Hermitian precondition.
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    gram(i, i) = gram(i, i).real();
    for (std::size_t j = i + 1; j < gram.cols(); ++j) {
      const Complex avg = 0.5 * (gram(i, j) + std::conj(gram(j, i)));
      gram(i, j) = avg;
      gram(j, i) = std::conj(avg);
    }
  }
  const auto eig = eig_hermitian(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues.back().real()));
}

double hermitian_defect(const CMatrix& a) {
  if (!a.is_square()) return 1.0;
  const double na = frob_norm(a);
  if (na == 0.0) return 0.0;
  return frob_norm(a - adjoint(a)) / na;
}

double spectral_radius(std::span<const Complex> eigenvalues) {
  double r = 0.0;
  for (const auto& z : eigenvalues) r = std::max(r, std::abs(z));
  return r;
}

}  // namespace maxregkit
