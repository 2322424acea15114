#include "maxregkit/fft.hpp"

#include <cmath>
#include <numbers>

#include "maxregkit/errors.hpp"

namespace maxregkit {

void fft_in_place(std::span<Complex> x, bool inverse) {
  const std::size_t n = x.size();
  if (!is_power_of_two(n)) {
    throw ArgumentError("fft: length " + std::to_string(n) + " is not a power of two");
  }
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  const double direction = inverse ? 1.0 : -1.0;
  std::vector<Complex> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = direction * 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(n);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex w = twiddle[k * stride];
        const Complex u = x[start + k];
        const Complex v = x[start + k + half] * w;
        x[start + k] = u + v;
        x[start + k + half] = u - v;
      }
    }
  }
}

void fft_columns(std::span<Complex> data, std::size_t length, std::size_t width, bool inverse) {
  if (data.size() != length * width) throw DimensionError("fft_columns: size mismatch");
  std::vector<Complex> column(length);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t j = 0; j < length; ++j) column[j] = data[j * width + c];
    fft_in_place(column, inverse);
    for (std::size_t j = 0; j < length; ++j) data[j * width + c] = column[j];
  }
}

namespace {

std::vector<CVector> transform(const std::vector<CVector>& x, bool inverse) {
  const std::size_t length = x.size();
  if (length == 0) throw ArgumentError("dft: empty sequence");
  const std::size_t width = x.front().size();
  std::vector<Complex> flat;
  flat.reserve(length * width);
  for (const auto& v : x) {
    if (v.size() != width) throw DimensionError("dft: vectors of unequal dimension");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  fft_columns(flat, length, width, inverse);
  const double scale = inverse ? 1.0 / static_cast<double>(length) : 1.0;
  std::vector<CVector> out(length, CVector(width));
  for (std::size_t j = 0; j < length; ++j)
    for (std::size_t c = 0; c < width; ++c) out[j][c] = scale * flat[j * width + c];
  return out;
}

}  // namespace

std::vector<CVector> dft(const std::vector<CVector>& x) { return transform(x, false); }
std::vector<CVector> idft(const std::vector<CVector>& x) { return transform(x, true); }

}  // namespace maxregkit
