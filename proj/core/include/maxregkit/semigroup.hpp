#pragma once

// Validated generators A (with -A generating a bounded analytic semigroup),
// the semigroup e^{-tA}, resolvents (zI + A)^{-1} and the Fourier multiplier
// symbols m_{+/-}(sigma, A) = A (+/- i sigma + A)^{-1}.

#include <vector>

#include "maxregkit/numlin.hpp"

namespace maxregkit {

enum class Sign { plus, minus };

constexpr double sign_value(Sign s) noexcept { return s == Sign::plus ? 1.0 : -1.0; }
constexpr Sign opposite(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }
const char* to_string(Sign s) noexcept;

/// A square matrix certified, from its spectrum, as a sectorial generator
/// with strictly positive spectral abscissa. Construct with make_generator.
class Generator {
 public:
  const CMatrix& matrix() const noexcept { return a_; }
  std::size_t dim() const noexcept { return a_.rows(); }
  const std::vector<Complex>& spectrum() const noexcept { return spectrum_; }

  /// min Re(lambda) over the spectrum.
  double alpha() const noexcept { return alpha_; }
  /// max |arg(lambda)| over the spectrum, in radians.
  double sector_angle() const noexcept { return sector_angle_; }
  /// Half-angle of analyticity, pi/2 - sector_angle. Recorded, not consumed.
  double analyticity_angle() const noexcept;
  bool is_selfadjoint() const noexcept { return selfadjoint_; }
  /// max_t ||e^{-tA}||_2 sampled on [0, 10/alpha]; 1 for normal A.
  double m_bound() const noexcept { return m_bound_; }
  double spectral_radius() const noexcept { return spectral_radius_; }

 private:
  friend Generator make_generator(const CMatrix& a);
  Generator() = default;

  CMatrix a_;
  std::vector<Complex> spectrum_;
  double alpha_ = 0.0;
  double sector_angle_ = 0.0;
  bool selfadjoint_ = false;
  double m_bound_ = 1.0;
  double spectral_radius_ = 0.0;
};

/// Validates `a`. Throws NotStableError when some Re(lambda) <= 0 and
/// NotSectorialError when some |arg(lambda)| >= pi/2 - 1e-9.
Generator make_generator(const CMatrix& a);

/// e^{M} by scaling and squaring with the diagonal [13/13] Pade approximant.
CMatrix expm(const CMatrix& m);

/// e^{-tA}; exactly the identity at t = 0.
CMatrix semigroup_at(const Generator& g, double t);

/// (zI + A)^{-1}. Throws SingularMatrixError when -z is within 1e-10 of the spectrum.
CMatrix resolvent(const Generator& g, Complex z);

struct MultiplierSymbol {
  Sign sign;
  double sigma;
  CMatrix value;
};

/// m_{sign}(sigma, A) = A (sign * i sigma + A)^{-1}, evaluated as
/// I - (sign * i sigma) (sign * i sigma + A)^{-1}.
MultiplierSymbol multiplier(const Generator& g, Sign sign, double sigma);

/// k(t) = A e^{-tA} for t > 0, and the zero matrix for t <= 0.
CMatrix kernel_eval(const Generator& g, double t);

}  // namespace maxregkit
