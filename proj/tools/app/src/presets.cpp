#include "maxregkit_app/presets.hpp"

#include <cmath>
#include <numbers>

#include "maxregkit/errors.hpp"
#include "maxregkit/random.hpp"

namespace maxregkit::app {

CMatrix laplacian_1d(std::size_t n) {
  if (n == 0) throw ArgumentError("laplacian_1d: n must be positive");
  const double scale = static_cast<double>((n + 1) * (n + 1));
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 2.0 * scale;
    if (i + 1 < n) {
      a(i, i + 1) = -scale;
      a(i + 1, i) = -scale;
    }
  }
  return a;
}

CMatrix random_sectorial(std::size_t n, std::uint64_t seed, double angle) {
  if (n == 0) throw ArgumentError("random_sectorial: n must be positive");
  if (!(angle >= 0.0) || angle >= std::numbers::pi / 2.0) {
    throw ArgumentError("random_sectorial: angle must lie in [0, pi/2)");
  }
  Rng rng(seed);
  std::vector<Complex> lambda(n);
  for (auto& l : lambda) {
    const double re = rng.uniform(0.5, 4.0);
    const double theta = rng.uniform(-angle, angle);
    l = {re, re * std::tan(theta)};
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CMatrix v = CMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v(i, j) += 0.3 * rng.complex_normal();
    CMatrix v_inv;
    try {
      v_inv = inverse(v);
    } catch (const SingularMatrixError&) {
      continue;
    }
    if (op_norm2(v) * op_norm2(v_inv) > 20.0) continue;
    return matmul(matmul(v, CMatrix::diagonal(lambda)), v_inv);
  }
  throw ConvergenceError("random_sectorial: no well-conditioned eigenbasis drawn", 1000);
}

CMatrix jordan_like(std::size_t n, double coupling) {
  if (n == 0) throw ArgumentError("jordan_like: n must be positive");
  CMatrix a = CMatrix::identity(n);
  for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = coupling;
  return a;
}

CMatrix scalar_matrix(Complex lambda) { return CMatrix{{lambda}}; }

CMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ArgumentError("random_hermitian: n must be positive");
  Rng rng(seed);
  std::vector<Complex> lambda(n);
  for (auto& l : lambda) l = rng.uniform(0.5, 4.0);
  // Columns of q orthonormalized in place, modified Gram-Schmidt.
  CMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = rng.complex_normal();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex proj{};
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, j));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= norm;
  }
  CMatrix a = matmul(matmul(q, CMatrix::diagonal(lambda)), adjoint(q));
  // Exact Hermitian symmetry, so the generator is recognised as self-adjoint.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) a(j, i) = std::conj(a(i, j));
  }
  return a;
}

}  // namespace maxregkit::app
