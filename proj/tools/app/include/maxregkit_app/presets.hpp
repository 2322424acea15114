#pragma once

#include <cstdint>
#include <string_view>

#include "maxregkit/numlin.hpp"

namespace maxregkit::app {

/// Dirichlet second difference: tridiag(-1, 2, -1) * (n + 1)^2.
CMatrix laplacian_1d(std::size_t n);

/// V diag(lambda) V^{-1} with Re(lambda) in [0.5, 4], |arg(lambda)| <= angle and
/// V = I + 0.3 * complex normal, redrawn until cond_2(V) <= 20.
CMatrix random_sectorial(std::size_t n, std::uint64_t seed, double angle);

/// Identity plus `coupling` on the superdiagonal.
CMatrix jordan_like(std::size_t n, double coupling);

/// 1x1 generator [lambda].
CMatrix scalar_matrix(Complex lambda);

/// Q diag(lambda) Q^* with lambda in [0.5, 4] and Q unitary (Gram-Schmidt of a
/// complex normal matrix).
CMatrix random_hermitian(std::size_t n, std::uint64_t seed);

}  // namespace maxregkit::app
