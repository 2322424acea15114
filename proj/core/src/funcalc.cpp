#include "maxregkit/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "maxregkit/errors.hpp"
#include "maxregkit/fft.hpp"

namespace maxregkit {

namespace {

constexpr double kBisectorialMargin = 1e-6;
constexpr double kSectorMargin = 1e-9;
constexpr std::size_t kMaxNodes = 4096;
constexpr double kQuadratureTol = 1e-11;
constexpr int kContourAttempts = 8;

std::vector<Complex> trim(std::vector<Complex> p) {
  while (p.size() > 1 && p.back() == Complex{}) p.pop_back();
  return p;
}

Complex centroid(const std::vector<Complex>& pts) {
  Complex c{};
  for (const auto& z : pts) c += z;
  return c / static_cast<double>(pts.size());
}

double max_distance(const std::vector<Complex>& pts, Complex c) {
  double d = 0.0;
  for (const auto& z : pts) d = std::max(d, std::abs(z - c));
  return d;
}

// Sum over nodes of b(z) (z - c)(zI - A)^{-1}, for the nodes with index k = offset + stride * i.
CMatrix node_sum(const CMatrix& a, const std::function<Complex(Complex)>& b, const Contour& c,
                 std::size_t total_nodes, std::size_t offset, std::size_t stride) {
  const std::size_t n = a.rows();
  CMatrix acc(n, n);
  const CMatrix id = CMatrix::identity(n);
  for (std::size_t k = offset; k < total_nodes; k += stride) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(total_nodes);
    const Complex dz = c.radius * Complex(std::cos(theta), std::sin(theta));
    const Complex z = c.center + dz;
    const Complex weight = b(z) * dz;
    if (!std::isfinite(weight.real()) || !std::isfinite(weight.imag())) {
      throw NoValidContourError(z);
    }
    CMatrix shifted = (-1.0) * a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += z;
    acc += weight * solve(shifted, id);
  }
  return acc;
}

}  // namespace

const char* to_string(HalfPlane side) noexcept {
  return side == HalfPlane::re_positive ? "re_positive" : "re_negative";
}

// ---- polynomials --------------------------------------------------------------

Complex polyval(const std::vector<Complex>& coefficients, Complex z) {
  Complex acc{};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> polymul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Complex> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Complex> polyroots(const std::vector<Complex>& coefficients) {
  const std::vector<Complex> p = trim(coefficients);
  const std::size_t degree = p.size() - 1;
  if (degree == 0) return {};
  CMatrix companion(degree, degree);
  const Complex lead = p.back();
  for (std::size_t j = 0; j < degree; ++j) companion(0, j) = -p[degree - 1 - j] / lead;
  for (std::size_t i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  return eig_general(companion).eigenvalues;
}

// ---- HoloFunction -------------------------------------------------------------

HoloFunction::HoloFunction(std::string name, Kind kind, std::function<Complex(Complex)> evaluator,
                           std::vector<Complex> poles)
    : name_(std::move(name)),
      kind_(kind),
      evaluator_(std::move(evaluator)),
      poles_(std::move(poles)) {}

HoloFunction HoloFunction::const_one() {
  return {"const_one", Kind::const_one, [](Complex) { return Complex{1.0}; }, {}};
}

HoloFunction HoloFunction::resolvent_frac(double sigma, Sign sign) {
  const Complex shift(0.0, sign_value(sign) * sigma);
  std::vector<Complex> poles;
  if (sigma != 0.0) poles.push_back(-shift);
  return {std::string("resolvent_frac(") + std::to_string(sigma) + "," + to_string(sign) + ")",
          Kind::resolvent_frac, [shift](Complex z) { return z / (shift + z); }, std::move(poles)};
}

HoloFunction HoloFunction::exp_scale(double t) {
  return {"exp_scale(" + std::to_string(t) + ")", Kind::exp_scale,
          [t](Complex z) { return std::exp(-t * z); }, {}};
}

HoloFunction HoloFunction::halfplane_indicator(HalfPlane side, double shift) {
  HoloFunction b("halfplane_indicator(" + std::string(to_string(side)) + ")",
                 Kind::halfplane_indicator,
                 [side, shift](Complex z) {
                   const double re = z.real() - shift;
                   const bool in = side == HalfPlane::re_positive ? re > 0.0 : re < 0.0;
                   return Complex{in ? 1.0 : 0.0};
                 },
                 {});
  b.side_ = side;
  b.shift_ = shift;
  return b;
}

HoloFunction HoloFunction::rational(std::vector<Complex> numerator,
                                    std::vector<Complex> denominator) {
  numerator = trim(std::move(numerator));
  denominator = trim(std::move(denominator));
  if (numerator.empty() || denominator.empty() || denominator.back() == Complex{}) {
    throw ArgumentError("rational: numerator and denominator must be non-empty and q != 0");
  }
  HoloFunction b("rational", Kind::rational,
                 [numerator, denominator](Complex z) {
                   return polyval(numerator, z) / polyval(denominator, z);
                 },
                 polyroots(denominator));
  b.numerator_ = std::move(numerator);
  b.denominator_ = std::move(denominator);
  return b;
}

HoloFunction operator*(const HoloFunction& a, const HoloFunction& b) {
  if (a.kind() == HoloFunction::Kind::halfplane_indicator ||
      b.kind() == HoloFunction::Kind::halfplane_indicator) {
    throw ArgumentError("halfplane_indicator cannot be multiplied inside the contour calculus");
  }
  std::vector<Complex> poles = a.poles();
  poles.insert(poles.end(), b.poles().begin(), b.poles().end());
  return {a.name() + "*" + b.name(), HoloFunction::Kind::product,
          [fa = a.evaluator_, fb = b.evaluator_](Complex z) { return fa(z) * fb(z); },
          std::move(poles)};
}

// ---- contours ------------------------------------------------------------------

Complex Contour::node(std::size_t k) const {
  const double theta =
      2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_nodes);
  return center + radius * Complex(std::cos(theta), std::sin(theta));
}

bool contour_admissible(const Contour& c, const std::vector<Complex>& inside,
                        const std::vector<Complex>& outside) {
  if (!(c.radius > 0.0)) return false;
  for (const auto& z : inside)
    if (std::abs(z - c.center) > (1.0 - kContourMargin) * c.radius) return false;
  for (const auto& z : outside)
    if (std::abs(z - c.center) < (1.0 + kContourMargin) * c.radius) return false;
  return true;
}

Contour auto_contour(const std::vector<Complex>& enclose, const std::vector<Complex>& exclude,
                     double min_radius) {
  if (enclose.empty()) throw ArgumentError("auto_contour: nothing to enclose");
  const Complex c0 = centroid(enclose);
  const double spread = max_distance(enclose, c0);
  const double preferred = 1.5 * spread + min_radius;

  Contour candidate{c0, preferred};
  if (contour_admissible(candidate, enclose, exclude)) return candidate;

  // Pole closest to the centroid drives the adjustments.
  Complex blocking = exclude.front();
  for (const auto& p : exclude)
    if (std::abs(p - c0) < std::abs(blocking - c0)) blocking = p;
  const double away_len = std::abs(c0 - blocking);
  const Complex away = away_len > 0.0 ? (c0 - blocking) / away_len : Complex{1.0};
  const double scale = std::max(spread, min_radius);

  for (int attempt = 1; attempt < kContourAttempts; ++attempt) {
    const Complex center = c0 + 0.25 * scale * static_cast<double>(attempt - 1) * away;
    const double r_low = max_distance(enclose, center) / (1.0 - kContourMargin);
    double r_high = std::numeric_limits<double>::infinity();
    for (const auto& p : exclude) r_high = std::min(r_high, std::abs(p - center) / (1.0 + kContourMargin));
    if (r_low > r_high) continue;
    double radius;
    if (preferred >= r_low && preferred <= r_high) {
      radius = preferred;
    } else {
      const double lower = std::max(r_low, 1e-3 * r_high);
      radius = std::sqrt(lower * r_high);
    }
    candidate = Contour{center, radius};
    if (contour_admissible(candidate, enclose, exclude)) return candidate;
  }
  throw NoValidContourError(blocking);
}

Contour auto_contour(const Generator& g, const HoloFunction& b) {
  return auto_contour(g.spectrum(), b.poles(), 0.5 * g.alpha());
}

CMatrix contour_integral(const CMatrix& a, const std::function<Complex(Complex)>& b,
                         const Contour& c) {
  if (!is_power_of_two(c.n_nodes)) throw ArgumentError("contour: node count must be a power of two");
  std::size_t nodes = c.n_nodes;
  CMatrix sum = node_sum(a, b, c, nodes, 0, 1);
  CMatrix current = (1.0 / static_cast<double>(nodes)) * sum;
  while (nodes < kMaxNodes) {
    // Doubling reuses the existing nodes; only the midpoints are new.
    sum += node_sum(a, b, c, 2 * nodes, 1, 2);
    nodes *= 2;
    CMatrix next = (1.0 / static_cast<double>(nodes)) * sum;
    const double change = frob_norm(next - current);
    current = std::move(next);
    if (change <= kQuadratureTol * std::max(1.0, frob_norm(current))) break;
  }
  return current;
}

CMatrix apply_calculus(const Generator& g, const HoloFunction& b, const Contour& c) {
  if (b.kind() == HoloFunction::Kind::halfplane_indicator) {
    throw ArgumentError("halfplane_indicator is only admissible through spectral_projection");
  }
  if (!contour_admissible(c, g.spectrum(), b.poles())) {
    Complex blocking = c.center;
    for (const auto& p : b.poles())
      if (std::abs(p - c.center) < (1.0 + kContourMargin) * c.radius) blocking = p;
    for (const auto& z : g.spectrum())
      if (std::abs(z - c.center) > (1.0 - kContourMargin) * c.radius) blocking = z;
    throw NoValidContourError(blocking);
  }
  return contour_integral(g.matrix(), [&b](Complex z) { return b(z); }, c);
}

CMatrix apply_calculus(const Generator& g, const HoloFunction& b) {
  return apply_calculus(g, b, auto_contour(g, b));
}

double homomorphism_defect(const Generator& g, const HoloFunction& b1, const HoloFunction& b2) {
  const HoloFunction product = b1 * b2;
  const Contour c = auto_contour(g, product);
  const CMatrix lhs = matmul(apply_calculus(g, b1, c), apply_calculus(g, b2, c));
  const CMatrix rhs = apply_calculus(g, product, c);
  return frob_norm(lhs - rhs) / std::max(1.0, frob_norm(rhs));
}

CMatrix spectral_projection(const CMatrix& m, HalfPlane side) {
  if (!m.is_square()) throw DimensionError("spectral_projection: matrix must be square");
  const auto spectrum = eig_general(m).eigenvalues;
  std::vector<Complex> selected;
  std::vector<Complex> others;
  double min_real = std::numeric_limits<double>::infinity();
  for (const auto& z : spectrum) {
    const double folded = std::abs(std::arg(z.real() >= 0.0 ? z : -z));
    if (std::abs(z.real()) <= kBisectorialMargin ||
        folded >= std::numbers::pi / 2.0 - kSectorMargin) {
      throw NotBisectorialError(z);
    }
    const bool positive = z.real() > 0.0;
    const bool wanted = side == HalfPlane::re_positive ? positive : !positive;
    (wanted ? selected : others).push_back(z);
    if (wanted) min_real = std::min(min_real, std::abs(z.real()));
  }
  const std::size_t n = m.rows();
  if (selected.empty()) return CMatrix::zeros(n, n);
  if (others.empty()) return CMatrix::identity(n);

  const Contour c = auto_contour(selected, others, 0.5 * min_real);
  return contour_integral(m, [](Complex) { return Complex{1.0}; }, c);
}

CMatrix evaluate(const Generator& g, const HoloFunction& b) {
  if (b.kind() == HoloFunction::Kind::halfplane_indicator) {
    CMatrix shifted = g.matrix();
    for (std::size_t i = 0; i < g.dim(); ++i) shifted(i, i) -= b.shift();
    return spectral_projection(shifted, b.side());
  }
  return apply_calculus(g, b);
}

ExtendedCommutatorReport extended_commutator_residual(const Generator& g, const HoloFunction& b1,
                                                      const HoloFunction& b2, const Signal& f,
                                                      Path path) {
  if (g.dim() != f.dim()) throw DimensionError("extended_commutator_residual: dimension mismatch");
  const CMatrix m1 = evaluate(g, b1);
  const CMatrix m2 = evaluate(g, b2);
  const KernelCache cache(g, f.grid());
  const auto apply = [&](const Signal& x, Sign sign) {
    if (path == Path::direct) return mreg_direct(cache, x, sign, QuadratureMode::trapezoid);
    return mreg_fourier(g, x, sign, FrequencyGrid(x.grid()));
  };

  Signal lhs = apply(apply_pointwise(m1, apply(apply_pointwise(m2, f), Sign::minus)), Sign::plus);
  const Signal rhs =
      apply(apply_pointwise(m2, apply(apply_pointwise(m1, f), Sign::plus)), Sign::minus);
  lhs -= rhs;

  const double fn = l2_norm(f);
  if (fn == 0.0) return {0.0, 0.0};
  const Signal boundary = apply_pointwise(matmul(m1, m2), boundary_commutator(cache, f));
  return {l2_norm(lhs) / fn, l2_norm(lhs - boundary) / fn};
}

}  // namespace maxregkit
