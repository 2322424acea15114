#include "maxregkit/semigroup.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "maxregkit/errors.hpp"

namespace maxregkit {

namespace {

constexpr double kSectorMargin = 1e-9;
constexpr double kSelfAdjointTol = 1e-12;
constexpr int kBoundSamples = 33;

// Coefficients of the [13/13] Pade approximant to exp.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norm for which the unscaled [13/13] approximant is used.
constexpr double kTheta13 = 5.4;

CMatrix axpy_sum(std::initializer_list<std::pair<double, const CMatrix*>> terms, std::size_t n) {
  CMatrix out(n, n);
  for (const auto& [coef, m] : terms) {
    for (std::size_t k = 0; k < n * n; ++k) out.data()[k] += coef * m->data()[k];
  }
  return out;
}

}  // namespace

const char* to_string(Sign s) noexcept { return s == Sign::plus ? "+" : "-"; }

double Generator::analyticity_angle() const noexcept {
  return std::numbers::pi / 2.0 - sector_angle_;
}

Generator make_generator(const CMatrix& a) {
  if (!a.is_square() || a.rows() == 0) {
    throw DimensionError("make_generator: matrix must be square and non-empty");
  }
  if (!a.all_finite()) throw ArgumentError("make_generator: matrix has non-finite entries");

  Generator g;
  g.a_ = a;
  g.spectrum_ = eig_general(a).eigenvalues;

  double alpha = std::numeric_limits<double>::infinity();
  double angle = 0.0;
  for (const auto& lambda : g.spectrum_) {
    if (!(lambda.real() > 0.0)) throw NotStableError(lambda);
    alpha = std::min(alpha, lambda.real());
    angle = std::max(angle, std::abs(std::arg(lambda)));
  }
  for (const auto& lambda : g.spectrum_) {
    const double arg = std::abs(std::arg(lambda));
    if (arg >= std::numbers::pi / 2.0 - kSectorMargin) throw NotSectorialError(lambda, arg);
  }
  g.alpha_ = alpha;
  g.sector_angle_ = angle;
  g.selfadjoint_ = hermitian_defect(a) <= kSelfAdjointTol;
  g.spectral_radius_ = maxregkit::spectral_radius(g.spectrum_);

  // Log-spaced samples of ||e^{-tA}|| on [1e-3 * 10/alpha, 10/alpha]; t = 0 contributes 1.
  double bound = 1.0;
  const double t_max = 10.0 / alpha;
  for (int k = 0; k < kBoundSamples; ++k) {
    const double t = t_max * std::pow(10.0, -3.0 + 3.0 * k / (kBoundSamples - 1));
    bound = std::max(bound, op_norm2(expm((-t) * a)));
  }
  g.m_bound_ = bound;
  return g;
}

CMatrix expm(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("expm: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return m;

  const double norm = norm1(m);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const CMatrix x = squarings > 0 ? std::ldexp(1.0, -squarings) * m : m;

  const CMatrix id = CMatrix::identity(n);
  const CMatrix x2 = matmul(x, x);
  const CMatrix x4 = matmul(x2, x2);
  const CMatrix x6 = matmul(x4, x2);
  const auto& b = kPade13;

  const CMatrix u_inner = axpy_sum({{b[13], &x6}, {b[11], &x4}, {b[9], &x2}}, n);
  const CMatrix u_tail =
      axpy_sum({{b[7], &x6}, {b[5], &x4}, {b[3], &x2}, {b[1], &id}}, n);
  const CMatrix u = matmul(x, matmul(x6, u_inner) + u_tail);

  const CMatrix v_inner = axpy_sum({{b[12], &x6}, {b[10], &x4}, {b[8], &x2}}, n);
  const CMatrix v_tail =
      axpy_sum({{b[6], &x6}, {b[4], &x4}, {b[2], &x2}, {b[0], &id}}, n);
  const CMatrix v = matmul(x6, v_inner) + v_tail;

  CMatrix r = solve(v - u, v + u);
  for (int k = 0; k < squarings; ++k) r = matmul(r, r);
  return r;
}

CMatrix semigroup_at(const Generator& g, double t) {
  if (t < 0.0) throw ArgumentError("semigroup_at: t must be non-negative");
  if (t == 0.0) return CMatrix::identity(g.dim());
  return expm((-t) * g.matrix());
}

CMatrix resolvent(const Generator& g, Complex z) {
  for (const auto& lambda : g.spectrum()) {
    if (std::abs(z + lambda) < 1e-10) throw SingularMatrixError(0, std::abs(z + lambda));
  }
  CMatrix shifted = g.matrix();
  for (std::size_t i = 0; i < g.dim(); ++i) shifted(i, i) += z;
  return solve(shifted, CMatrix::identity(g.dim()));
}

MultiplierSymbol multiplier(const Generator& g, Sign sign, double sigma) {
  const Complex z(0.0, sign_value(sign) * sigma);
  if (sigma == 0.0) return {sign, sigma, CMatrix::identity(g.dim())};
  CMatrix value = (-z) * resolvent(g, z);
  for (std::size_t i = 0; i < g.dim(); ++i) value(i, i) += 1.0;
  return {sign, sigma, std::move(value)};
}

CMatrix kernel_eval(const Generator& g, double t) {
  if (t <= 0.0) return CMatrix::zeros(g.dim(), g.dim());
  return matmul(g.matrix(), semigroup_at(g, t));
}

}  // namespace maxregkit
