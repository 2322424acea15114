#pragma once

// Uniform time grids on [0, T], H-valued sampled signals and their
// L^2(R+; H) quadrature.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maxregkit/numlin.hpp"

namespace maxregkit {

/// Uniform grid t_j = j*h, j = 0..N-1, with h = T/N and N a power of two
/// in [64, 2^20].
class Grid {
 public:
  static constexpr std::size_t kMinSamples = 64;
  static constexpr std::size_t kMaxSamples = std::size_t{1} << 20;

  Grid(double horizon, std::size_t samples);

  double horizon() const noexcept { return horizon_; }
  std::size_t size() const noexcept { return samples_; }
  double step() const noexcept { return step_; }
  double node(std::size_t j) const noexcept { return static_cast<double>(j) * step_; }

  /// Same horizon with twice as many samples.
  Grid refined() const { return Grid(horizon_, 2 * samples_); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double horizon_;
  std::size_t samples_;
  double step_;
};

/// DFT frequencies of the 2N zero-padded transform: sigma_k = 2 pi k~ / (L h),
/// k~ the signed alias of k in [-L/2, L/2).
struct FrequencyGrid {
  std::size_t length;
  double step;

  explicit FrequencyGrid(const Grid& grid) : length(2 * grid.size()), step(grid.step()) {}
  double sigma(std::size_t k) const noexcept;
};

/// Samples f(t_j) in C^dim, stored row-major as N x dim.
class Signal {
 public:
  Signal(Grid grid, std::size_t dim);
  Signal(Grid grid, std::size_t dim, std::vector<Complex> samples);

  static Signal from_function(const Grid& grid, std::size_t dim,
                              const std::function<CVector(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return grid_.size(); }

  std::span<Complex> at(std::size_t j) { return {samples_.data() + j * dim_, dim_}; }
  std::span<const Complex> at(std::size_t j) const { return {samples_.data() + j * dim_, dim_}; }

  std::vector<Complex>& samples() noexcept { return samples_; }
  const std::vector<Complex>& samples() const noexcept { return samples_; }

  Signal& operator+=(const Signal& other);
  Signal& operator-=(const Signal& other);
  Signal& operator*=(Complex scale);

 private:
  Grid grid_;
  std::size_t dim_;
  std::vector<Complex> samples_;
};

Signal operator+(Signal a, const Signal& b);
Signal operator-(Signal a, const Signal& b);
Signal operator*(Complex s, Signal a);

/// Trapezoid quadrature of int_0^T <f(t), g(t)>_H dt, linear in f, with weight
/// h/2 at t = 0 and f(T) = g(T) = 0.
Complex inner(const Signal& f, const Signal& g);
double l2_norm(const Signal& f);

/// (M f)(t_j) = M f(t_j) at every node.
Signal apply_pointwise(const CMatrix& m, const Signal& f);

/// Largest node-wise Euclidean norm of f.
double max_node_norm(const Signal& f);

/// Fraction of the quadrature energy carried by the last `fraction` of the window.
double tail_energy_fraction(const Signal& f, double fraction = 0.1);

/// Parameters of the built-in signal families. Unused fields are ignored.
struct SignalParams {
  double t0 = 2.0;     ///< gauss_bump centre
  double width = 0.5;  ///< gauss_bump width w in exp(-(t - t0)^2 / (2 w^2))
  double beta = 1.0;   ///< exp_decay rate
  std::size_t modes = 8;        ///< randsmooth: number of low-frequency coefficients
  double cutoff_start = 0.7;    ///< randsmooth: cutoff ramp start, fraction of T
  double cutoff_end = 0.9;      ///< randsmooth: zero from this fraction of T on
  std::optional<CVector> direction;  ///< overrides the preset's direction
};

/// Known names: "gauss_bump", "exp_decay", "randsmooth". Throws ArgumentError otherwise.
Signal preset_signal(std::string_view name, const Grid& grid, std::size_t dim,
                     const SignalParams& params, std::uint64_t seed);

/// Time after which the preset is negligible (for choosing a default horizon);
/// 0 when the support scales with the grid itself.
double preset_support(std::string_view name, const SignalParams& params);

/// C-infinity step: 1 for t <= start, 0 for t >= end.
double smooth_cutoff(double t, double start, double end);

}  // namespace maxregkit
