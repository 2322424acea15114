#include "maxregkit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxregkit/errors.hpp"
#include "maxregkit/fft.hpp"
#include "maxregkit/random.hpp"

namespace maxregkit {

Grid::Grid(double horizon, std::size_t samples)
    : horizon_(horizon), samples_(samples), step_(horizon / static_cast<double>(samples)) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ArgumentError("Grid: horizon T must be positive and finite");
  }
  if (!is_power_of_two(samples) || samples < kMinSamples || samples > kMaxSamples) {
    throw ArgumentError("Grid: N = " + std::to_string(samples) +
                        " must be a power of two in [64, 2^20]");
  }
  if (step_ * static_cast<double>(samples_) != horizon_) {
    throw ArgumentError("Grid: h * N does not reproduce T exactly");
  }
}

double FrequencyGrid::sigma(std::size_t k) const noexcept {
  const auto l = static_cast<std::ptrdiff_t>(length);
  auto signed_k = static_cast<std::ptrdiff_t>(k);
  if (signed_k >= l / 2) signed_k -= l;
  return 2.0 * std::numbers::pi * static_cast<double>(signed_k) /
         (static_cast<double>(length) * step);
}

// ---- Signal -----------------------------------------------------------------

Signal::Signal(Grid grid, std::size_t dim)
    : grid_(grid), dim_(dim), samples_(grid.size() * dim) {
  if (dim == 0) throw DimensionError("Signal: dimension must be positive");
}

Signal::Signal(Grid grid, std::size_t dim, std::vector<Complex> samples)
    : grid_(grid), dim_(dim), samples_(std::move(samples)) {
  if (dim == 0) throw DimensionError("Signal: dimension must be positive");
  if (samples_.size() != grid_.size() * dim_) {
    throw DimensionError("Signal: expected " + std::to_string(grid_.size() * dim_) +
                         " samples, got " + std::to_string(samples_.size()));
  }
  for (const auto& z : samples_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ArgumentError("Signal: samples must be finite");
    }
  }
}

Signal Signal::from_function(const Grid& grid, std::size_t dim,
                             const std::function<CVector(double)>& f) {
  Signal s(grid, dim);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const CVector v = f(grid.node(j));
    if (v.size() != dim) throw DimensionError("Signal::from_function: wrong vector length");
    std::copy(v.begin(), v.end(), s.at(j).begin());
  }
  return s;
}

namespace {

void require_compatible(const Signal& a, const Signal& b, const char* op) {
  if (!(a.grid() == b.grid())) throw DimensionError(std::string(op) + ": grid mismatch");
  if (a.dim() != b.dim()) throw DimensionError(std::string(op) + ": dimension mismatch");
}

}  // namespace

Signal& Signal::operator+=(const Signal& other) {
  require_compatible(*this, other, "Signal::operator+=");
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += other.samples_[k];
  return *this;
}

Signal& Signal::operator-=(const Signal& other) {
  require_compatible(*this, other, "Signal::operator-=");
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= other.samples_[k];
  return *this;
}

Signal& Signal::operator*=(Complex scale) {
  for (auto& z : samples_) z *= scale;
  return *this;
}

Signal operator+(Signal a, const Signal& b) { return a += b; }
Signal operator-(Signal a, const Signal& b) { return a -= b; }
Signal operator*(Complex s, Signal a) { return a *= s; }

Complex inner(const Signal& f, const Signal& g) {
  require_compatible(f, g, "inner");
  const std::size_t n = f.dim();
  Complex head{};
  for (std::size_t i = 0; i < n; ++i) head += f.at(0)[i] * std::conj(g.at(0)[i]);
  Complex body{};
  for (std::size_t j = 1; j < f.size(); ++j) {
    const auto fj = f.at(j);
    const auto gj = g.at(j);
    for (std::size_t i = 0; i < n; ++i) body += fj[i] * std::conj(gj[i]);
  }
  return f.grid().step() * (0.5 * head + body);
}

double l2_norm(const Signal& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

Signal apply_pointwise(const CMatrix& m, const Signal& f) {
  if (m.rows() != f.dim() || m.cols() != f.dim()) {
    throw DimensionError("apply_pointwise: matrix does not match signal dimension");
  }
  Signal out(f.grid(), f.dim());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto x = f.at(j);
    auto y = out.at(j);
    for (std::size_t r = 0; r < f.dim(); ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < f.dim(); ++c) acc += m(r, c) * x[c];
      y[r] = acc;
    }
  }
  return out;
}

double max_node_norm(const Signal& f) {
  double best = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) best = std::max(best, vec_norm(f.at(j)));
  return best;
}

double tail_energy_fraction(const Signal& f, double fraction) {
  const double total = inner(f, f).real();
  if (total <= 0.0) return 0.0;
  const auto first =
      static_cast<std::size_t>(std::floor((1.0 - fraction) * static_cast<double>(f.size())));
  double tail = 0.0;
  for (std::size_t j = std::max<std::size_t>(first, 1); j < f.size(); ++j) {
    tail += std::norm(vec_norm(f.at(j)));
  }
  return f.grid().step() * tail / total;
}

// ---- presets ----------------------------------------------------------------

double smooth_cutoff(double t, double start, double end) {
  if (t <= start) return 1.0;
  if (t >= end) return 0.0;
  const double s = (end - t) / (end - start);
  const auto bump = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); };
  const double a = bump(s);
  const double b = bump(1.0 - s);
  return a / (a + b);
}

namespace {

CVector unit_direction(const SignalParams& params, std::size_t dim, Rng& rng, bool random) {
  CVector d;
  if (params.direction) {
    d = *params.direction;
    if (d.size() != dim) throw DimensionError("preset_signal: direction has wrong dimension");
  } else if (random) {
    d.resize(dim);
    for (auto& z : d) z = rng.complex_normal();
  } else {
    d.assign(dim, Complex{1.0});
  }
  const double nd = vec_norm(d);
  if (nd == 0.0) throw ArgumentError("preset_signal: direction must be non-zero");
  for (auto& z : d) z /= nd;
  return d;
}

}  // namespace

Signal preset_signal(std::string_view name, const Grid& grid, std::size_t dim,
                     const SignalParams& params, std::uint64_t seed) {
  Rng rng(seed);
  if (name == "gauss_bump") {
    if (!(params.width > 0.0)) throw ArgumentError("gauss_bump: width must be positive");
    const CVector d = unit_direction(params, dim, rng, true);
    return Signal::from_function(grid, dim, [&](double t) {
      const double x = (t - params.t0) / params.width;
      const double amp = std::exp(-0.5 * x * x);
      CVector v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = amp * d[i];
      return v;
    });
  }
  if (name == "exp_decay") {
    if (!(params.beta > 0.0)) throw ArgumentError("exp_decay: beta must be positive");
    const CVector d = unit_direction(params, dim, rng, false);
    return Signal::from_function(grid, dim, [&](double t) {
      const double amp = std::exp(-params.beta * t);
      CVector v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = amp * d[i];
      return v;
    });
  }
  if (name == "randsmooth") {
    if (params.modes == 0 || params.modes >= grid.size()) {
      throw ArgumentError("randsmooth: modes must be in [1, N)");
    }
    if (!(params.cutoff_start < params.cutoff_end) || params.cutoff_end > 1.0 ||
        params.cutoff_start < 0.0) {
      throw ArgumentError("randsmooth: need 0 <= cutoff_start < cutoff_end <= 1");
    }
    const std::size_t n = grid.size();
    std::vector<Complex> coefficients(n * dim);
    const auto half = static_cast<std::ptrdiff_t>(params.modes / 2);
    const double scale = static_cast<double>(n) / std::sqrt(static_cast<double>(params.modes));
    for (std::size_t m = 0; m < params.modes; ++m) {
      const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(m) - half;
      const std::size_t slot = k < 0 ? n - static_cast<std::size_t>(-k) : static_cast<std::size_t>(k);
      for (std::size_t i = 0; i < dim; ++i) coefficients[slot * dim + i] = scale * rng.complex_normal();
    }
    fft_columns(coefficients, n, dim, true);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double start = params.cutoff_start * grid.horizon();
    const double end = params.cutoff_end * grid.horizon();
    for (std::size_t j = 0; j < n; ++j) {
      const double chi = smooth_cutoff(grid.node(j), start, end) * inv_n;
      for (std::size_t i = 0; i < dim; ++i) coefficients[j * dim + i] *= chi;
    }
    return Signal(grid, dim, std::move(coefficients));
  }
  throw ArgumentError("unknown signal preset '" + std::string(name) + "'");
}

double preset_support(std::string_view name, const SignalParams& params) {
  if (name == "gauss_bump") return params.t0 + 6.0 * params.width;
  if (name == "exp_decay") return 20.0 / params.beta;
  if (name == "randsmooth") return 0.0;
  throw ArgumentError("unknown signal preset '" + std::string(name) + "'");
}

}  // namespace maxregkit
