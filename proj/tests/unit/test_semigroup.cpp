#include <gtest/gtest.h>

#include <cmath>

#include "maxregkit/errors.hpp"
#include "maxregkit/semigroup.hpp"
#include "maxregkit_app/presets.hpp"
#include "testing_util.hpp"

using namespace maxregkit;
using maxregkit::testing::random_matrix;

namespace {

// Truncated Taylor series, adequate for ||m|| <= 1.
CMatrix taylor_exp(const CMatrix& m) {
  const std::size_t n = m.rows();
  CMatrix term = CMatrix::identity(n);
  CMatrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = (1.0 / k) * matmul(term, m);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(Expm, DiagonalAndNilpotent) {
  const CMatrix d = CMatrix::diagonal({-1.0, Complex(0.0, 2.0), 3.0});
  const CMatrix e = expm(d);
  EXPECT_NEAR(std::abs(e(0, 0) - std::exp(-1.0)), 0.0, 1e-15);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(Complex(0.0, 2.0))), 1e-14);
  EXPECT_LT(std::abs(e(2, 2) - std::exp(3.0)) / std::exp(3.0), 1e-14);

  const CMatrix n{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_LT(frob_norm(expm(n) - CMatrix{{1.0, 1.0}, {0.0, 1.0}}), 1e-15);
}

TEST(Expm, AgreesWithTaylorSeriesOnSmallMatrices) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    CMatrix m = random_matrix(rng, n, n);
    m *= 0.5 / std::max(1.0, op_norm2(m));
    EXPECT_LT(frob_norm(expm(m) - taylor_exp(m)), 1e-14);
  }
}

TEST(Expm, ScalingAndSquaringOnLargeNorm) {
  // e^{tB} for the rotation generator B = [[0, -1], [1, 0]].
  const double t = 40.0;
  const CMatrix b{{0.0, -t}, {t, 0.0}};
  const CMatrix expected{{std::cos(t), -std::sin(t)}, {std::sin(t), std::cos(t)}};
  EXPECT_LT(frob_norm(expm(b) - expected), 1e-11);
}

TEST(Generator, ValidatesSpectrum) {
  EXPECT_THROW(make_generator(CMatrix{{-1.0}}), NotStableError);
  EXPECT_THROW(make_generator(CMatrix{{0.0, 1.0}, {-1.0, 0.0}}), NotStableError);
  EXPECT_THROW(make_generator(CMatrix{{Complex(1e-12, 1.0)}}), NotSectorialError);
  EXPECT_THROW(make_generator(CMatrix(2, 3)), DimensionError);
  try {
    make_generator(CMatrix::diagonal({1.0, -2.0}));
    FAIL();
  } catch (const NotStableError& e) {
    EXPECT_NEAR(e.eigenvalue().real(), -2.0, 1e-12);
  }
}

TEST(Generator, Properties) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, Complex(2.0, 2.0)}));
  EXPECT_NEAR(g.alpha(), 1.0, 1e-14);
  EXPECT_NEAR(g.sector_angle(), std::atan(1.0), 1e-14);
  EXPECT_FALSE(g.is_selfadjoint());
  EXPECT_NEAR(g.m_bound(), 1.0, 1e-12);
  EXPECT_NEAR(g.spectral_radius(), std::sqrt(8.0), 1e-12);

  const Generator lap = make_generator(app::laplacian_1d(4));
  EXPECT_TRUE(lap.is_selfadjoint());

  // Non-normal: transient growth of ||e^{-tA}||.
  const Generator j = make_generator(app::jordan_like(2, 10.0));
  EXPECT_GT(j.m_bound(), 3.0);
}

TEST(Semigroup, IdentityAtZeroAndScalarDecay) {
  const Generator g = make_generator(app::random_sectorial(3, 4, 1.0));
  EXPECT_EQ(semigroup_at(g, 0.0), CMatrix::identity(3));
  EXPECT_THROW(semigroup_at(g, -1.0), ArgumentError);

  const Generator s = make_generator(CMatrix{{Complex(2.0, 1.0)}});
  EXPECT_LT(std::abs(semigroup_at(s, 0.7)(0, 0) - std::exp(-0.7 * Complex(2.0, 1.0))), 1e-15);
}

TEST(Semigroup, GroupLaw) {
  const Generator g = make_generator(app::random_sectorial(4, 8, 1.2));
  for (const auto& [s, t] : {std::pair{0.1, 0.3}, std::pair{1.0, 2.5}, std::pair{0.0, 0.4}}) {
    const CMatrix lhs = semigroup_at(g, s + t);
    const CMatrix rhs = matmul(semigroup_at(g, s), semigroup_at(g, t));
    EXPECT_LT(frob_norm(lhs - rhs), 1e-12 * std::max(1.0, frob_norm(lhs)));
  }
}

TEST(Resolvent, ScalarAndSingular) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, 2.0}));
  const CMatrix r = resolvent(g, Complex(0.0, 1.0));
  EXPECT_LT(std::abs(r(0, 0) - 1.0 / Complex(1.0, 1.0)), 1e-15);
  EXPECT_LT(std::abs(r(1, 1) - 1.0 / Complex(2.0, 1.0)), 1e-15);
  EXPECT_THROW(resolvent(g, -1.0), SingularMatrixError);
}

TEST(Multiplier, ScalarSymbol) {
  const Generator g = make_generator(CMatrix{{3.0}});
  EXPECT_EQ(multiplier(g, Sign::plus, 0.0).value, CMatrix::identity(1));
  for (double sigma : {-5.0, 0.3, 2.0}) {
    const Complex expected = 3.0 / (Complex(0.0, sigma) + 3.0);
    EXPECT_LT(std::abs(multiplier(g, Sign::plus, sigma).value(0, 0) - expected), 1e-15);
    EXPECT_LT(std::abs(multiplier(g, Sign::minus, sigma).value(0, 0) - std::conj(expected)), 1e-15);
  }
}

TEST(Multiplier, MatchesResolventProduct) {
  const Generator g = make_generator(app::random_sectorial(4, 1, 1.0));
  for (double sigma : {0.2, 1.0, 7.0}) {
    for (const Sign s : {Sign::plus, Sign::minus}) {
      const CMatrix direct = matmul(g.matrix(), resolvent(g, Complex(0.0, sign_value(s) * sigma)));
      EXPECT_LT(frob_norm(multiplier(g, s, sigma).value - direct), 1e-12);
    }
  }
}

TEST(Multiplier, AdjointSymmetry) {
  // m_+^A(sigma)^* = m_-^{A*}(sigma).
  const Generator g = make_generator(app::random_sectorial(4, 6, 1.1));
  const Generator gs = make_generator(adjoint(g.matrix()));
  for (double sigma : {-3.0, 0.5, 10.0}) {
    const CMatrix lhs = adjoint(multiplier(g, Sign::plus, sigma).value);
    const CMatrix rhs = multiplier(gs, Sign::minus, sigma).value;
    EXPECT_LT(frob_norm(lhs - rhs), 1e-12);
    EXPECT_NEAR(op_norm2(multiplier(g, Sign::plus, sigma).value),
                op_norm2(multiplier(gs, Sign::minus, sigma).value), 1e-10);
  }
}

TEST(Kernel, Evaluation) {
  const Generator g = make_generator(CMatrix{{2.0}});
  EXPECT_EQ(kernel_eval(g, 0.0), CMatrix(1, 1));
  EXPECT_EQ(kernel_eval(g, -1.0), CMatrix(1, 1));
  EXPECT_NEAR(kernel_eval(g, 0.5)(0, 0).real(), 2.0 * std::exp(-1.0), 1e-15);
}
