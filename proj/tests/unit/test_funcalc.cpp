#include <gtest/gtest.h>

#include <cmath>

#include "maxregkit/errors.hpp"
#include "maxregkit/funcalc.hpp"
#include "maxregkit_app/presets.hpp"
#include "testing_util.hpp"

using namespace maxregkit;
using maxregkit::testing::random_matrix;

namespace {

// V diag(lambda) V^{-1}, with lambda clustered in two groups.
CMatrix clustered(std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix v = CMatrix::identity(4) + 0.2 * random_matrix(rng, 4, 4);
  const CMatrix d = CMatrix::diagonal({Complex(1.0, 0.2), Complex(1.3, -0.1), 4.0, Complex(4.5, 0.3)});
  return matmul(matmul(v, d), inverse(v));
}

}  // namespace

TEST(Polynomials, EvaluationProductRoots) {
  const std::vector<Complex> p{2.0, -3.0, 1.0};  // (z - 1)(z - 2)
  EXPECT_EQ(polyval(p, 1.0), Complex(0.0));
  EXPECT_EQ(polyval(p, 3.0), Complex(2.0));
  const auto roots = polyroots(p);
  ASSERT_EQ(roots.size(), 2u);
  const double lo = std::min(roots[0].real(), roots[1].real());
  const double hi = std::max(roots[0].real(), roots[1].real());
  EXPECT_NEAR(lo, 1.0, 1e-12);
  EXPECT_NEAR(hi, 2.0, 1e-12);
  const auto q = polymul(p, {Complex(0.0, 1.0), 1.0});
  for (const Complex z : {Complex(0.3, 1.0), Complex(-2.0, 0.5)}) {
    EXPECT_LT(std::abs(polyval(q, z) - polyval(p, z) * (z + Complex(0.0, 1.0))), 1e-12);
  }
  EXPECT_TRUE(polyroots({5.0}).empty());
}

TEST(HoloFunction, Builtins) {
  EXPECT_EQ(HoloFunction::const_one()(Complex(3.0, 1.0)), Complex(1.0));
  const auto m = HoloFunction::resolvent_frac(2.0, Sign::minus);
  EXPECT_LT(std::abs(m(1.0) - 1.0 / Complex(1.0, -2.0)), 1e-15);
  ASSERT_EQ(m.poles().size(), 1u);
  EXPECT_EQ(m.poles()[0], Complex(0.0, 2.0));
  EXPECT_TRUE(HoloFunction::resolvent_frac(0.0, Sign::plus).poles().empty());
  EXPECT_LT(std::abs(HoloFunction::exp_scale(0.5)(2.0) - std::exp(-1.0)), 1e-15);
  const auto h = HoloFunction::halfplane_indicator(HalfPlane::re_negative);
  EXPECT_EQ(h(-1.0), Complex(1.0));
  EXPECT_EQ(h(1.0), Complex(0.0));
  EXPECT_THROW(HoloFunction::rational({1.0}, {0.0}), ArgumentError);
  EXPECT_THROW(h * HoloFunction::const_one(), ArgumentError);
}

TEST(AutoContour, GeometryFromSpectrum) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, 3.0}));
  const Contour c = auto_contour(g, HoloFunction::const_one());
  EXPECT_LT(std::abs(c.center - Complex(2.0)), 1e-12);
  EXPECT_GE(c.radius, 1.5);
  EXPECT_TRUE(contour_admissible(c, g.spectrum(), {}));
}

TEST(AutoContour, PoleTriggersAdjustment) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, 3.0}));
  const auto b = HoloFunction::resolvent_frac(0.5, Sign::plus);
  const Contour preferred{Complex(2.0), 1.5 * 1.0 + 0.5};
  EXPECT_FALSE(contour_admissible(preferred, g.spectrum(), b.poles()));
  const Contour c = auto_contour(g, b);
  EXPECT_TRUE(contour_admissible(c, g.spectrum(), b.poles()));
  const CMatrix value = apply_calculus(g, b, c);
  EXPECT_LT(std::abs(value(0, 0) - 1.0 / Complex(1.0, 0.5)), 1e-10);
  EXPECT_LT(std::abs(value(1, 1) - 3.0 / Complex(3.0, 0.5)), 1e-10);
}

TEST(AutoContour, PoleBetweenEigenvaluesIsFatal) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, 1.2}));
  const auto b = HoloFunction::rational({1.0}, {-1.1, 1.0});
  try {
    auto_contour(g, b);
    FAIL() << "expected NoValidContourError";
  } catch (const NoValidContourError& e) {
    EXPECT_LT(std::abs(e.blocking_point() - Complex(1.1)), 1e-12);
  }
  EXPECT_THROW(apply_calculus(g, b, Contour{Complex(1.1), 0.5}), NoValidContourError);
}

TEST(ApplyCalculus, ClosedForms) {
  const Generator d = make_generator(CMatrix::diagonal({1.0, 2.0}));
  EXPECT_LT(frob_norm(apply_calculus(d, HoloFunction::const_one()) - CMatrix::identity(2)), 1e-10);
  const CMatrix m = apply_calculus(d, HoloFunction::resolvent_frac(1.0, Sign::plus));
  const CMatrix expected = CMatrix::diagonal({1.0 / Complex(1.0, 1.0), 2.0 / Complex(2.0, 1.0)});
  EXPECT_LT(frob_norm(m - expected), 1e-10);

  const Generator g = make_generator(app::random_sectorial(4, 2, 0.8));
  EXPECT_LT(frob_norm(apply_calculus(g, HoloFunction::exp_scale(0.7)) - semigroup_at(g, 0.7)), 1e-9);
  EXPECT_THROW(apply_calculus(g, HoloFunction::halfplane_indicator(HalfPlane::re_positive)),
               ArgumentError);
}

TEST(ApplyCalculus, ContourIndependence) {
  const Generator g = make_generator(CMatrix::diagonal({1.0, 3.0}));
  const auto b = HoloFunction::exp_scale(0.3);
  const CMatrix a1 = apply_calculus(g, b, Contour{Complex(2.0), 2.0});
  const CMatrix a2 = apply_calculus(g, b, Contour{Complex(2.5, 0.3), 4.0, 512});
  EXPECT_LT(frob_norm(a1 - a2), 1e-9);
}

TEST(ApplyCalculus, HermitianDiagonalization) {
  const Generator g = make_generator(app::random_hermitian(5, 4));
  const auto eig = eig_hermitian(g.matrix());
  for (const auto& b : {HoloFunction::exp_scale(0.4), HoloFunction::resolvent_frac(3.0, Sign::minus)}) {
    std::vector<Complex> values;
    for (const auto& l : eig.eigenvalues) values.push_back(b(l));
    const CMatrix oracle = matmul(matmul(eig.eigenvectors, CMatrix::diagonal(values)), adjoint(eig.eigenvectors));
    EXPECT_LT(frob_norm(apply_calculus(g, b) - oracle), 1e-9) << b.name();
  }
}

TEST(Homomorphism, ConstOne) {
  const Generator g = make_generator(app::random_sectorial(3, 1, 0.5));
  EXPECT_LE(homomorphism_defect(g, HoloFunction::const_one(), HoloFunction::const_one()), 1e-10);
}

TEST(Homomorphism, MultiplierPairGivesSquareRatio) {
  const Generator g = make_generator(app::random_sectorial(4, 3, 0.5));
  const auto bp = HoloFunction::resolvent_frac(1.0, Sign::plus);
  const auto bm = HoloFunction::resolvent_frac(1.0, Sign::minus);
  EXPECT_LE(homomorphism_defect(g, bp, bm), 1e-9);
  // (b+ b-)(A) = A^2 (I + A^2)^{-1}.
  const CMatrix a2 = matmul(g.matrix(), g.matrix());
  const CMatrix oracle = solve(CMatrix::identity(4) + a2, a2);
  EXPECT_LT(frob_norm(apply_calculus(g, bp * bm) - oracle), 1e-9);
}

TEST(Homomorphism, RationalProductMatchesConvolvedCoefficients) {
  const Generator g = make_generator(app::random_sectorial(3, 5, 0.5));
  const std::vector<Complex> p1{1.0, 2.0}, q1{5.0, 1.0}, p2{Complex(0.0, 1.0)}, q2{6.0, 0.5, 1.0};
  const auto r1 = HoloFunction::rational(p1, q1);
  const auto r2 = HoloFunction::rational(p2, q2);
  EXPECT_LE(homomorphism_defect(g, r1, r2), 1e-9);
  const auto joint = HoloFunction::rational(polymul(p1, p2), polymul(q1, q2));
  const Contour c = auto_contour(g, joint);
  const CMatrix product = matmul(apply_calculus(g, r1, c), apply_calculus(g, r2, c));
  EXPECT_LT(frob_norm(product - apply_calculus(g, joint, c)), 1e-9);
}

TEST(Homomorphism, RandomGeneratorsBuiltinPairs) {
  const std::vector<HoloFunction> builtins = {
      HoloFunction::const_one(), HoloFunction::resolvent_frac(2.0, Sign::plus),
      HoloFunction::resolvent_frac(2.0, Sign::minus), HoloFunction::exp_scale(0.5)};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 1 + seed % 8;
    const Generator g = make_generator(app::random_sectorial(n, 100 + seed, 0.5));
    for (const auto& b1 : builtins)
      for (const auto& b2 : builtins) {
        EXPECT_LE(homomorphism_defect(g, b1, b2), 1e-9) << b1.name() << " " << b2.name() << " seed " << seed;
      }
  }
}

TEST(Multipliers, CalculusCommutatorAndSymbols) {
  Rng rng(77);
  for (int k = 0; k < 20; ++k) {
    const Generator g = make_generator(app::random_sectorial(1 + k % 6, 500 + k, 0.5));
    const double sigma = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
    const CMatrix p = apply_calculus(g, HoloFunction::resolvent_frac(sigma, Sign::plus));
    const CMatrix m = apply_calculus(g, HoloFunction::resolvent_frac(sigma, Sign::minus));
    EXPECT_LE(frob_norm(matmul(p, m) - matmul(m, p)), 1e-9);
    EXPECT_LE(frob_norm(p - multiplier(g, Sign::plus, sigma).value), 1e-9);
    EXPECT_LE(frob_norm(m - multiplier(g, Sign::minus, sigma).value), 1e-9);
  }
}

TEST(SpectralProjection, Diagonal) {
  const CMatrix d = CMatrix::diagonal({1.0, -1.0});
  EXPECT_LT(frob_norm(spectral_projection(d, HalfPlane::re_positive) - CMatrix::diagonal({1.0, 0.0})), 1e-10);
  EXPECT_LT(frob_norm(spectral_projection(d, HalfPlane::re_negative) - CMatrix::diagonal({0.0, 1.0})), 1e-10);
  EXPECT_EQ(spectral_projection(CMatrix::diagonal({1.0, 2.0}), HalfPlane::re_negative), CMatrix(2, 2));
  EXPECT_THROW(spectral_projection(CMatrix::diagonal({1.0, 0.0}), HalfPlane::re_positive),
               NotBisectorialError);
}

TEST(SpectralProjection, ProjectionIdentities) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix v = CMatrix::identity(4) + 0.3 * random_matrix(rng, 4, 4);
    const CMatrix d = CMatrix::diagonal({Complex(1.0, 0.5), Complex(2.0, -0.3), Complex(-1.5, 0.2), -0.7});
    const CMatrix m = matmul(matmul(v, d), inverse(v));
    const CMatrix p = spectral_projection(m, HalfPlane::re_positive);
    const CMatrix q = spectral_projection(m, HalfPlane::re_negative);
    const CMatrix id = CMatrix::identity(4);
    EXPECT_LT(frob_norm(matmul(p, p) - p), 1e-9);
    EXPECT_LT(frob_norm(matmul(p, q)), 1e-9);
    EXPECT_LT(frob_norm(p + q - id), 1e-9);
    EXPECT_LT(frob_norm(matmul(p, m) - matmul(m, p)), 1e-9);
  }
}

TEST(SpectralProjection, ToyDiracBlock) {
  // [[0, a], [b, 0]] has eigenvalues +/- s, s = sqrt(ab), eigenvectors (a, +/- s).
  const double a = 2.0, b = 0.5;
  const double s = std::sqrt(a * b);
  const CMatrix m{{0.0, a}, {b, 0.0}};
  const CMatrix v{{a, a}, {s, -s}};
  const CMatrix oracle = matmul(matmul(v, CMatrix::diagonal({1.0, 0.0})), inverse(v));
  EXPECT_LT(frob_norm(spectral_projection(m, HalfPlane::re_positive) - oracle), 1e-9);
}

TEST(Evaluate, ShiftedHalfPlaneProjectsOntoCluster) {
  const Generator g = make_generator(clustered(3));
  const CMatrix p = evaluate(g, HoloFunction::halfplane_indicator(HalfPlane::re_positive, 2.5));
  EXPECT_LT(frob_norm(matmul(p, p) - p), 1e-9);
  EXPECT_NEAR(trace(p).real(), 2.0, 1e-9);
  EXPECT_LT(frob_norm(matmul(p, g.matrix()) - matmul(g.matrix(), p)), 1e-9);
}

TEST(ExtendedCommutator, ReducesToCommutatorForConstOne) {
  const Generator g = make_generator(app::random_sectorial(3, 2, 0.8));
  const Signal f = preset_signal("randsmooth", Grid(20.0 / g.alpha(), 1024), 3, {}, 2);
  const auto ext = extended_commutator_residual(g, HoloFunction::const_one(), HoloFunction::const_one(), f);
  const auto plain = commutator_residual(g, f, Path::direct);
  EXPECT_NEAR(ext.rel_residual, plain.rel_residual, 1e-9);
  EXPECT_NEAR(ext.corrected_rel_residual, plain.corrected_rel_residual, 1e-9);
}

TEST(ExtendedCommutator, ScalarFourierPath) {
  const Generator g = make_generator(CMatrix{{1.0}});
  SignalParams p;
  p.t0 = 10.0;
  p.width = 1.0;
  const Signal f = preset_signal("gauss_bump", Grid(40.0, 2048), 1, p, 0);
  const auto r = extended_commutator_residual(g, HoloFunction::resolvent_frac(1.0, Sign::plus),
                                              HoloFunction::exp_scale(0.5), f, Path::fourier);
  EXPECT_LE(r.rel_residual, 1e-3);
}

TEST(ExtendedCommutator, CorrectedResidualConvergesForProjections) {
  const Generator g = make_generator(clustered(3));
  const auto proj = HoloFunction::halfplane_indicator(HalfPlane::re_positive, 2.5);
  std::vector<double> corrected;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    const Signal f = preset_signal("randsmooth", Grid(20.0 / g.alpha(), n), 4, {}, 5);
    corrected.push_back(extended_commutator_residual(g, proj, proj, f).corrected_rel_residual);
  }
  EXPECT_GE(std::log2(corrected[0] / corrected[2]) / 2.0, 1.5);
}
