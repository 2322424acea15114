#include "maxregkit/maxreg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "maxregkit/errors.hpp"
#include "maxregkit/fft.hpp"

namespace maxregkit {

namespace {

constexpr double kGapGuard = 1e-300;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_dim(const Generator& g, const Signal& f) {
  if (g.dim() != f.dim()) {
    throw DimensionError("generator dimension " + std::to_string(g.dim()) +
                         " does not match signal dimension " + std::to_string(f.dim()));
  }
}

void require_grid(const KernelCache& cache, const Signal& f) {
  require_dim(cache.generator(), f);
  if (!(cache.grid() == f.grid())) throw DimensionError("kernel cache built for another grid");
}

// acc += w * K x for an n x n block K; real arithmetic keeps the loop free of
// the library's complex-multiply special-case handling.
inline void accumulate(const Complex* k, const Complex* x, double w, Complex* acc, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    double re = 0.0;
    double im = 0.0;
    const Complex* kr = k + r * n;
    for (std::size_t c = 0; c < n; ++c) {
      const double a = kr[c].real();
      const double b = kr[c].imag();
      const double xr = x[c].real();
      const double xi = x[c].imag();
      re += a * xr - b * xi;
      im += a * xi + b * xr;
    }
    acc[r] += Complex(w * re, w * im);
  }
}

enum class Block { semigroup, kernel };

std::span<const Complex> block(const KernelCache& cache, Block which, std::size_t j) {
  return which == Block::kernel ? cache.kernel(j) : cache.semigroup(j);
}

// Quadrature of int_0^t B(t-s) f(s) ds (forward) or int_t^T B(s-t) f(s) ds
// (backward) with B the selected cached block family and f(T) = 0.
Signal direct_sum(const KernelCache& cache, const Signal& f, Sign sign, QuadratureMode mode,
                  Block which) {
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const double h = f.grid().step();
  Signal out(f.grid(), n);
  const bool trapezoid = mode == QuadratureMode::trapezoid;

  for (std::size_t j = 0; j < N; ++j) {
    Complex* acc = out.at(j).data();
    if (sign == Sign::plus) {
      if (j == 0) continue;
      // lag m = j - s, s from j down to 0
      if (trapezoid) accumulate(block(cache, which, 0).data(), f.at(j).data(), 0.5 * h, acc, n);
      for (std::size_t m = 1; m < j; ++m) {
        accumulate(block(cache, which, m).data(), f.at(j - m).data(), h, acc, n);
      }
      const double w_last = trapezoid ? 0.5 * h : h;
      accumulate(block(cache, which, j).data(), f.at(0).data(), w_last, acc, n);
    } else {
      // lag m = s - j, s from j to N-1; the node at T carries f(T) = 0.
      if (trapezoid) accumulate(block(cache, which, 0).data(), f.at(j).data(), 0.5 * h, acc, n);
      for (std::size_t m = 1; j + m < N; ++m) {
        accumulate(block(cache, which, m).data(), f.at(j + m).data(), h, acc, n);
      }
    }
  }
  return out;
}

// c = sum_s w_s B(index(s)) f_s with trapezoid weights (h/2 at s = 0, f(T) = 0).
CVector weighted_moment(const KernelCache& cache, const Signal& f, bool from_end) {
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const double h = f.grid().step();
  CVector c(n);
  for (std::size_t s = 0; s < N; ++s) {
    const std::size_t idx = from_end ? N - s : s;
    accumulate(cache.semigroup(idx).data(), f.at(s).data(), s == 0 ? 0.5 * h : h, c.data(), n);
  }
  return c;
}

}  // namespace

const char* to_string(QuadratureMode m) noexcept {
  return m == QuadratureMode::rect ? "rect" : "trapezoid";
}

const char* to_string(Path p) noexcept { return p == Path::direct ? "direct" : "fourier"; }

// ---- KernelCache --------------------------------------------------------------

KernelCache::KernelCache(const Generator& g, const Grid& grid) : generator_(g), grid_(grid) {
  const std::size_t n = g.dim();
  const std::size_t count = grid.size() + 1;
  semigroup_.resize(count * n * n);
  kernel_.resize(count * n * n);

  const CMatrix step = semigroup_at(g, grid.step());
  CMatrix current = CMatrix::identity(n);
  for (std::size_t j = 0; j < count; ++j) {
    if (j > 0) current = matmul(current, step);
    const CMatrix k = matmul(g.matrix(), current);
    std::copy(current.entries().begin(), current.entries().end(), semigroup_.begin() + j * n * n);
    std::copy(k.entries().begin(), k.entries().end(), kernel_.begin() + j * n * n);
  }
}

std::span<const Complex> KernelCache::semigroup(std::size_t j) const {
  const std::size_t nn = dim() * dim();
  return {semigroup_.data() + j * nn, nn};
}

std::span<const Complex> KernelCache::kernel(std::size_t j) const {
  const std::size_t nn = dim() * dim();
  return {kernel_.data() + j * nn, nn};
}

// ---- operators ----------------------------------------------------------------

double truncation_tail_bound(const Generator& g, const Grid& grid, double f_norm) {
  return std::exp(-0.5 * g.alpha() * grid.horizon()) * g.m_bound() * f_norm;
}

Signal mreg_direct(const KernelCache& cache, const Signal& f, Sign sign, QuadratureMode mode) {
  require_grid(cache, f);
  return direct_sum(cache, f, sign, mode, Block::kernel);
}

namespace {

MaxRegResult direct_result(const Generator& g, const Signal& f, Sign sign, QuadratureMode mode) {
  require_dim(g, f);
  const auto start = Clock::now();
  const KernelCache cache(g, f.grid());
  Signal out = mreg_direct(cache, f, sign, mode);
  const double elapsed = seconds_since(start);
  return {std::move(out), Path::direct, truncation_tail_bound(g, f.grid(), l2_norm(f)), elapsed};
}

}  // namespace

MaxRegResult mreg_forward_direct(const Generator& g, const Signal& f, QuadratureMode mode) {
  return direct_result(g, f, Sign::plus, mode);
}

MaxRegResult mreg_backward_direct(const Generator& g, const Signal& f, QuadratureMode mode) {
  return direct_result(g, f, Sign::minus, mode);
}

Signal mreg_rect_fft(const KernelCache& cache, const Signal& f, Sign sign) {
  require_grid(cache, f);
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const std::size_t L = 2 * N;
  const double h = f.grid().step();

  // Weighted kernel sequence on the circle of length L, one column per (r, c) entry.
  std::vector<Complex> kernel(L * n * n);
  for (std::size_t m = 1; m < N; ++m) {
    const std::size_t slot = sign == Sign::plus ? m : L - m;
    const auto km = cache.kernel(m);
    for (std::size_t e = 0; e < n * n; ++e) kernel[slot * n * n + e] = h * km[e];
  }
  fft_columns(kernel, L, n * n, false);

  std::vector<Complex> x(L * n);
  std::copy(f.samples().begin(), f.samples().end(), x.begin());
  fft_columns(x, L, n, false);

  std::vector<Complex> y(L * n);
  for (std::size_t k = 0; k < L; ++k) {
    accumulate(kernel.data() + k * n * n, x.data() + k * n, 1.0, y.data() + k * n, n);
  }
  fft_columns(y, L, n, true);

  const double inv_l = 1.0 / static_cast<double>(L);
  std::vector<Complex> samples(N * n);
  for (std::size_t e = 0; e < N * n; ++e) samples[e] = inv_l * y[e];
  return Signal(f.grid(), n, std::move(samples));
}

Signal mreg_fourier(const Generator& g, const Signal& f, Sign sign, const FrequencyGrid& freqs) {
  require_dim(g, f);
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const std::size_t L = freqs.length;
  if (L < N) throw DimensionError("mreg_fourier: frequency grid shorter than the signal");

  std::vector<Complex> x(L * n);
  std::copy(f.samples().begin(), f.samples().end(), x.begin());
  fft_columns(x, L, n, false);

  std::vector<Complex> y(L * n);
  for (std::size_t k = 0; k < L; ++k) {
    const MultiplierSymbol symbol = multiplier(g, sign, freqs.sigma(k));
    accumulate(symbol.value.data(), x.data() + k * n, 1.0, y.data() + k * n, n);
  }
  fft_columns(y, L, n, true);

  const double inv_l = 1.0 / static_cast<double>(L);
  std::vector<Complex> samples(N * n);
  for (std::size_t e = 0; e < N * n; ++e) samples[e] = inv_l * y[e];
  return Signal(f.grid(), n, std::move(samples));
}

MaxRegResult mreg_fourier(const Generator& g, const Signal& f, Sign sign) {
  const auto start = Clock::now();
  Signal out = mreg_fourier(g, f, sign, FrequencyGrid(f.grid()));
  const double elapsed = seconds_since(start);
  return {std::move(out), Path::fourier, truncation_tail_bound(g, f.grid(), l2_norm(f)), elapsed};
}

// ---- Cauchy problems ----------------------------------------------------------

Signal solve_forward(const KernelCache& cache, const Signal& f) {
  require_grid(cache, f);
  return direct_sum(cache, f, Sign::plus, QuadratureMode::trapezoid, Block::semigroup);
}

Signal solve_backward(const KernelCache& cache, const Signal& f) {
  require_grid(cache, f);
  Signal v = direct_sum(cache, f, Sign::minus, QuadratureMode::trapezoid, Block::semigroup);
  v *= -1.0;
  return v;
}

Signal solve_forward(const Generator& g, const Signal& f) {
  require_dim(g, f);
  return solve_forward(KernelCache(g, f.grid()), f);
}

Signal solve_backward(const Generator& g, const Signal& f) {
  require_dim(g, f);
  return solve_backward(KernelCache(g, f.grid()), f);
}

OdeResidual ode_residual(const KernelCache& cache, const Signal& f, Sign sign) {
  require_grid(cache, f);
  const Signal u = sign == Sign::plus ? solve_forward(cache, f) : solve_backward(cache, f);
  const Signal au = apply_pointwise(cache.generator().matrix(), u);
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const double h = f.grid().step();
  const double s = sign_value(sign);

  double sum = 0.0;
  for (std::size_t j = 1; j + 1 < N; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex du = (u.at(j + 1)[i] - u.at(j - 1)[i]) / (2.0 * h);
      sum += std::norm(du + s * au.at(j)[i] - f.at(j)[i]);
    }
  }
  const double fn = l2_norm(f);
  const double residual = std::sqrt(h * sum);
  return {fn > 0.0 ? residual / fn : residual, sign == Sign::plus ? vec_norm(u.at(0)) : 0.0};
}

OdeResidual ode_residual(const Generator& g, const Signal& f, Sign sign) {
  require_dim(g, f);
  return ode_residual(KernelCache(g, f.grid()), f, sign);
}

// ---- identities -----------------------------------------------------------------

Signal boundary_commutator(const KernelCache& cache, const Signal& f) {
  require_grid(cache, f);
  const std::size_t n = f.dim();
  const std::size_t N = f.size();
  const CVector c0 = weighted_moment(cache, f, false);
  const CVector cT = weighted_moment(cache, f, true);
  Signal out(f.grid(), n);
  for (std::size_t j = 0; j < N; ++j) {
    Complex* acc = out.at(j).data();
    accumulate(cache.kernel(j).data(), c0.data(), -0.5, acc, n);
    accumulate(cache.kernel(N - j).data(), cT.data(), 0.5, acc, n);
  }
  return out;
}

CommutatorReport commutator_residual(const KernelCache& cache, const Signal& f, Path path) {
  require_grid(cache, f);
  const auto start = Clock::now();
  const Generator& g = cache.generator();
  const auto apply = [&](const Signal& x, Sign sign) {
    if (path == Path::direct) return mreg_direct(cache, x, sign, QuadratureMode::trapezoid);
    return mreg_fourier(g, x, sign, FrequencyGrid(x.grid()));
  };
  Signal commutator = apply(apply(f, Sign::minus), Sign::plus);
  commutator -= apply(apply(f, Sign::plus), Sign::minus);
  const double elapsed = seconds_since(start);

  const double fn = l2_norm(f);
  const double denom = std::max(fn, kGapGuard);
  const Signal boundary = boundary_commutator(cache, f);
  const double abs_residual = l2_norm(commutator);
  return {abs_residual,
          fn > 0.0 ? abs_residual / denom : 0.0,
          f.grid(),
          path,
          fn > 0.0 ? l2_norm(boundary) / denom : 0.0,
          fn > 0.0 ? l2_norm(commutator - boundary) / denom : 0.0,
          elapsed};
}

CommutatorReport commutator_residual(const Generator& g, const Signal& f, Path path) {
  require_dim(g, f);
  return commutator_residual(KernelCache(g, f.grid()), f, path);
}

NormEqualityReport norm_equality_report(const KernelCache& cache, const Signal& f) {
  require_grid(cache, f);
  const double plus = l2_norm(mreg_direct(cache, f, Sign::plus));
  const double minus = l2_norm(mreg_direct(cache, f, Sign::minus));
  const double gap = std::abs(plus - minus) / std::max({plus, minus, kGapGuard});
  const double predicted = inner(boundary_commutator(cache, f), f).real();
  return {plus, minus, gap, cache.generator().is_selfadjoint(), minus * minus - plus * plus,
          predicted};
}

NormEqualityReport norm_equality_report(const Generator& g, const Signal& f) {
  require_dim(g, f);
  return norm_equality_report(KernelCache(g, f.grid()), f);
}

double desimon_constant(const Generator& g, double sigma_max, int n_sigma) {
  if (n_sigma < 64) throw ArgumentError("desimon_constant: n_sigma must be at least 64");
  if (sigma_max <= 0.0) sigma_max = 1e3 * g.spectral_radius();
  const int per_side = (n_sigma - 1) / 2;
  const double sigma_min = sigma_max * 1e-7;

  double best = op_norm2(multiplier(g, Sign::plus, 0.0).value);
  for (int k = 0; k < per_side; ++k) {
    const double frac = per_side == 1 ? 1.0 : static_cast<double>(k) / (per_side - 1);
    const double sigma = sigma_min * std::pow(sigma_max / sigma_min, frac);
    best = std::max(best, op_norm2(multiplier(g, Sign::plus, sigma).value));
    best = std::max(best, op_norm2(multiplier(g, Sign::plus, -sigma).value));
  }
  return best;
}

double adjoint_defect(const Generator& g, const Signal& f, const Signal& phi, Sign sign) {
  require_dim(g, f);
  if (!(f.grid() == phi.grid()) || f.dim() != phi.dim()) {
    throw DimensionError("adjoint_defect: f and phi live on different grids or dimensions");
  }
  const double fn = l2_norm(f);
  const double pn = l2_norm(phi);
  if (fn == 0.0 || pn == 0.0) return 0.0;

  const KernelCache cache(g, f.grid());
  const KernelCache dual(make_generator(adjoint(g.matrix())), f.grid());
  const Complex lhs = inner(mreg_direct(cache, f, sign), phi);
  const Complex rhs = inner(f, mreg_direct(dual, phi, opposite(sign)));
  return std::abs(lhs - rhs) / (fn * pn);
}

}  // namespace maxregkit
