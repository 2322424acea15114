#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "maxregkit/numlin.hpp"

namespace maxregkit {

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 transform, unnormalized in both directions:
/// forward X_k = sum_j x_j e^{-2 pi i jk/L}, inverse uses e^{+2 pi i jk/L}.
/// Throws ArgumentError unless x.size() is a power of two.
void fft_in_place(std::span<Complex> x, bool inverse);

/// Transforms every column of a row-major (length x width) array.
void fft_columns(std::span<Complex> data, std::size_t length, std::size_t width, bool inverse);

/// Forward DFT of a sequence of L vectors (all of one dimension).
std::vector<CVector> dft(const std::vector<CVector>& x);
/// Inverse DFT, normalized by 1/L.
std::vector<CVector> idft(const std::vector<CVector>& x);

}  // namespace maxregkit
