#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxregkit {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of operands do not fit together (matrix sizes, signal dims, grids).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument outside the shape category (bad grid size, unknown name).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::size_t pivot_index, double pivot_magnitude);
  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot_magnitude() const noexcept { return pivot_magnitude_; }

 private:
  std::size_t pivot_index_;
  double pivot_magnitude_;
};

class NotHermitianError : public Error {
 public:
  explicit NotHermitianError(double relative_defect);
  double relative_defect() const noexcept { return relative_defect_; }

 private:
  double relative_defect_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iteration_cap);
  int iteration_cap() const noexcept { return iteration_cap_; }

 private:
  int iteration_cap_;
};

/// A hypothesis on the input operator failed (stability, sectoriality, ...).
/// The CLI maps this family to its own exit status.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Some eigenvalue has Re(lambda) <= 0.
class NotStableError : public ValidationError {
 public:
  explicit NotStableError(std::complex<double> eigenvalue);
  std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::complex<double> eigenvalue_;
};

/// Some eigenvalue lies outside the sector |arg z| < pi/2 - 1e-9.
class NotSectorialError : public ValidationError {
 public:
  NotSectorialError(std::complex<double> eigenvalue, double angle);
  std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }
  double angle() const noexcept { return angle_; }

 private:
  std::complex<double> eigenvalue_;
  double angle_;
};

class NotBisectorialError : public ValidationError {
 public:
  explicit NotBisectorialError(std::complex<double> eigenvalue);
  std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

 private:
  std::complex<double> eigenvalue_;
};

class NoValidContourError : public ValidationError {
 public:
  explicit NoValidContourError(std::complex<double> blocking_point);
  std::complex<double> blocking_point() const noexcept { return blocking_point_; }

 private:
  std::complex<double> blocking_point_;
};

/// Malformed matrix/signal file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxregkit
