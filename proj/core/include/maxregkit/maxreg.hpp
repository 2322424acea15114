#pragma once

// Forward and backward maximal regularity operators
//
//   (M+ f)(t) = int_0^t A e^{-(t-s)A} f(s) ds,
//   (M- f)(t) = int_t^T A e^{-(s-t)A} f(s) ds   (R+ truncated at the grid horizon),
//
// evaluated either by direct O(N^2) quadrature in time or through the
// operator-valued Fourier multipliers A (+/- i sigma + A)^{-1} on the 2N
// zero-padded DFT grid, together with the mild solutions of the associated
// Cauchy problems and the identities relating them.

#include <span>
#include <vector>

#include "maxregkit/numlin.hpp"
#include "maxregkit/semigroup.hpp"
#include "maxregkit/signal.hpp"

namespace maxregkit {

enum class QuadratureMode {
  rect,       ///< weight h on lags >= 1, zero at lag 0; a plain discrete convolution
  trapezoid,  ///< composite trapezoid, second order
};

enum class Path { direct, fourier };

const char* to_string(QuadratureMode m) noexcept;
const char* to_string(Path p) noexcept;

/// Samples e^{-jhA} and A e^{-jhA} for j = 0..N, built from one Pade
/// evaluation of e^{-hA} and repeated multiplication. Immutable once built.
class KernelCache {
 public:
  KernelCache(const Generator& g, const Grid& grid);

  const Generator& generator() const noexcept { return generator_; }
  const Grid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return generator_.dim(); }

  /// e^{-jhA}, row-major n x n.
  std::span<const Complex> semigroup(std::size_t j) const;
  /// A e^{-jhA}, row-major n x n.
  std::span<const Complex> kernel(std::size_t j) const;

 private:
  Generator generator_;
  Grid grid_;
  std::vector<Complex> semigroup_;
  std::vector<Complex> kernel_;
};

struct MaxRegResult {
  Signal output;
  Path path;
  /// Worst-case estimate e^{-alpha T/2} m_bound ||f|| of what the finite window misses.
  double truncation_tail_bound;
  double wall_time;
};

MaxRegResult mreg_forward_direct(const Generator& g, const Signal& f,
                                 QuadratureMode mode = QuadratureMode::trapezoid);
MaxRegResult mreg_backward_direct(const Generator& g, const Signal& f,
                                  QuadratureMode mode = QuadratureMode::trapezoid);
MaxRegResult mreg_fourier(const Generator& g, const Signal& f, Sign sign);

/// Direct quadrature with a prebuilt cache. Fixed summation order: ascending lag.
Signal mreg_direct(const KernelCache& cache, const Signal& f, Sign sign,
                   QuadratureMode mode = QuadratureMode::trapezoid);

/// The rect quadrature evaluated as a 2N zero-padded FFT convolution of the
/// weighted kernel samples. Agrees with mreg_direct(rect) to roundoff.
Signal mreg_rect_fft(const KernelCache& cache, const Signal& f, Sign sign);

/// Multiplier path with symbols sampled on the padded DFT frequency grid.
Signal mreg_fourier(const Generator& g, const Signal& f, Sign sign, const FrequencyGrid& freqs);

/// Mild solution u(t) = int_0^t e^{-(t-s)A} f(s) ds of u' + Au = f, u(0) = 0.
Signal solve_forward(const Generator& g, const Signal& f);
Signal solve_forward(const KernelCache& cache, const Signal& f);
/// Mild solution v(t) = -int_t^T e^{-(s-t)A} f(s) ds of v' - Av = f, v(T) = 0.
Signal solve_backward(const Generator& g, const Signal& f);
Signal solve_backward(const KernelCache& cache, const Signal& f);

/// Closed form of the commutator of the window operators:
///   [M+, M-] f(t) = -1/2 A e^{-tA} c_0 + 1/2 A e^{-(T-t)A} c_T,
///   c_0 = int_0^T e^{-sA} f(s) ds,  c_T = int_0^T e^{-(T-s)A} f(s) ds.
/// The second term vanishes as T -> infinity; the first does not.
Signal boundary_commutator(const KernelCache& cache, const Signal& f);

struct CommutatorReport {
  double abs_residual;
  double rel_residual;
  Grid grid;
  Path path;
  /// ||boundary_commutator(f)|| / ||f||.
  double boundary_rel_norm;
  /// ||[M+, M-] f - boundary_commutator(f)|| / ||f||.
  double corrected_rel_residual;
  double wall_time;
};

CommutatorReport commutator_residual(const Generator& g, const Signal& f, Path path);
CommutatorReport commutator_residual(const KernelCache& cache, const Signal& f, Path path);

struct NormEqualityReport {
  double norm_plus;
  double norm_minus;
  double rel_gap;
  bool is_selfadjoint;
  /// norm_minus^2 - norm_plus^2.
  double squared_gap;
  /// Re <boundary_commutator(f), f>; equals squared_gap when A = A^*.
  double predicted_squared_gap;
};

NormEqualityReport norm_equality_report(const Generator& g, const Signal& f);
NormEqualityReport norm_equality_report(const KernelCache& cache, const Signal& f);

/// sup over a log-symmetric sigma grid of ||A (i sigma + A)^{-1}||_2.
/// sigma_max <= 0 selects 1e3 times the spectral radius. Requires n_sigma >= 64.
double desimon_constant(const Generator& g, double sigma_max = 0.0, int n_sigma = 257);

/// |<M+^A f, phi> - <f, M-^{A*} phi>| / (||f|| ||phi||) via trapezoid quadrature.
/// With sign = minus the roles are swapped: |<M-^A f, phi> - <f, M+^{A*} phi>|.
double adjoint_defect(const Generator& g, const Signal& f, const Signal& phi,
                      Sign sign = Sign::plus);

struct OdeResidual {
  /// ||D_t u +/- A u - f|| over interior nodes (centered differences), over ||f||.
  double rel_residual;
  /// |u(0)| for the forward problem, 0 is exact by construction.
  double initial_value;
};

/// Residual of the forward (sign = plus) or backward (sign = minus) Cauchy problem.
OdeResidual ode_residual(const Generator& g, const Signal& f, Sign sign);
OdeResidual ode_residual(const KernelCache& cache, const Signal& f, Sign sign);

double truncation_tail_bound(const Generator& g, const Grid& grid, double f_norm);

}  // namespace maxregkit
