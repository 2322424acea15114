#pragma once

// Holomorphic functional calculus b(A) = (1/2 pi i) \oint b(z) (zI - A)^{-1} dz
// on circular contours, Riesz spectral projections and the extended
// commutator [M+ b1(A), M- b2(A)].

#include <functional>
#include <string>
#include <vector>

#include "maxregkit/maxreg.hpp"
#include "maxregkit/numlin.hpp"
#include "maxregkit/semigroup.hpp"
#include "maxregkit/signal.hpp"

namespace maxregkit {

enum class HalfPlane { re_positive, re_negative };

const char* to_string(HalfPlane side) noexcept;

/// A function holomorphic away from a finite list of poles.
class HoloFunction {
 public:
  enum class Kind { const_one, resolvent_frac, exp_scale, halfplane_indicator, rational, product };

  static HoloFunction const_one();
  /// z (sign * i sigma + z)^{-1}, i.e. the scalar multiplier symbol.
  static HoloFunction resolvent_frac(double sigma, Sign sign);
  /// e^{-t z}.
  static HoloFunction exp_scale(double t);
  /// 1 on {Re(z - shift) > 0} (re_positive) or {Re(z - shift) < 0}, else 0.
  /// Only usable through spectral_projection of A - shift I.
  static HoloFunction halfplane_indicator(HalfPlane side, double shift = 0.0);
  /// p(z)/q(z) with coefficients in ascending powers. Poles are the roots of q.
  static HoloFunction rational(std::vector<Complex> numerator, std::vector<Complex> denominator);

  const std::string& name() const noexcept { return name_; }
  Kind kind() const noexcept { return kind_; }
  Complex operator()(Complex z) const { return evaluator_(z); }
  /// Points the contour must keep outside.
  const std::vector<Complex>& poles() const noexcept { return poles_; }

  HalfPlane side() const noexcept { return side_; }
  double shift() const noexcept { return shift_; }
  const std::vector<Complex>& numerator() const noexcept { return numerator_; }
  const std::vector<Complex>& denominator() const noexcept { return denominator_; }

  /// Pointwise product; poles are the union of both lists.
  friend HoloFunction operator*(const HoloFunction& a, const HoloFunction& b);

 private:
  HoloFunction(std::string name, Kind kind, std::function<Complex(Complex)> evaluator,
               std::vector<Complex> poles);

  std::string name_;
  Kind kind_;
  std::function<Complex(Complex)> evaluator_;
  std::vector<Complex> poles_;
  HalfPlane side_ = HalfPlane::re_positive;
  double shift_ = 0.0;
  std::vector<Complex> numerator_;
  std::vector<Complex> denominator_;
};

Complex polyval(const std::vector<Complex>& coefficients, Complex z);
/// Coefficient convolution: the product polynomial.
std::vector<Complex> polymul(const std::vector<Complex>& a, const std::vector<Complex>& b);
/// Roots via the companion matrix.
std::vector<Complex> polyroots(const std::vector<Complex>& coefficients);

/// Circle with trapezoid nodes z_k = center + radius e^{2 pi i k/n}.
struct Contour {
  Complex center;
  double radius;
  std::size_t n_nodes = 256;

  Complex node(std::size_t k) const;
};

/// Relative margin both sides of the circle must keep: enclosed points within
/// 0.9 radius of the centre, excluded points beyond 1.1 radius.
inline constexpr double kContourMargin = 0.1;

/// True when every point of `inside` and `outside` respects the margins.
bool contour_admissible(const Contour& c, const std::vector<Complex>& inside,
                        const std::vector<Complex>& outside);

/// Circle about the spectrum centroid, radius 1.5 * spread + 0.5 alpha,
/// adjusted up to 8 times when a pole of b breaks the exterior margin.
/// Throws NoValidContourError naming the blocking pole.
Contour auto_contour(const Generator& g, const HoloFunction& b);
Contour auto_contour(const std::vector<Complex>& enclose, const std::vector<Complex>& exclude,
                     double min_radius);

/// Cauchy integral of b against the resolvent of a matrix on a given circle.
/// Node count doubles from c.n_nodes until successive results agree to 1e-11
/// (cap 4096). No admissibility check.
CMatrix contour_integral(const CMatrix& a, const std::function<Complex(Complex)>& b,
                         const Contour& c);

/// b(A). Throws NoValidContourError when the contour is not admissible for (A, b).
CMatrix apply_calculus(const Generator& g, const HoloFunction& b, const Contour& c);
CMatrix apply_calculus(const Generator& g, const HoloFunction& b);

/// ||b1(A) b2(A) - (b1 b2)(A)||_F / max(1, ||(b1 b2)(A)||_F) on one shared contour.
double homomorphism_defect(const Generator& g, const HoloFunction& b1, const HoloFunction& b2);

/// Riesz projection onto the spectral part of m in the chosen open half-plane.
/// Throws NotBisectorialError for eigenvalues with |Re| <= 1e-6.
CMatrix spectral_projection(const CMatrix& m, HalfPlane side);

/// b(A), routing halfplane_indicator through spectral_projection(A - shift I).
CMatrix evaluate(const Generator& g, const HoloFunction& b);

struct ExtendedCommutatorReport {
  double rel_residual;
  /// Residual after removing b1(A) b2(A) boundary_commutator(f).
  double corrected_rel_residual;
};

/// Relative L^2 norm of M+ b1(A) M- b2(A) f - M- b2(A) M+ b1(A) f.
ExtendedCommutatorReport extended_commutator_residual(const Generator& g, const HoloFunction& b1,
                                                      const HoloFunction& b2, const Signal& f,
                                                      Path path = Path::direct);

}  // namespace maxregkit
