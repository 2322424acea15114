#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "maxregkit/errors.hpp"
#include "maxregkit/numlin.hpp"

namespace maxregkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Householder reduction to upper Hessenberg form; similarity preserves the spectrum.
void reduce_to_hessenberg(CMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  CVector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;

    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0};
    const Complex alpha = -phase * xnorm;

    std::fill(v.begin(), v.end(), Complex{});
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // h <- (I - 2 v v^*) h
    for (std::size_t j = k; j < n; ++j) {
      Complex dot{};
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * dot;
    }
    // h <- h (I - 2 v v^*)
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot{};
      for (std::size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Givens {
  double c;
  Complex s;
};

// G = [[c, s], [-conj(s), c]] maps (a, b) to (r, 0).
Givens make_givens(Complex a, Complex b) {
  const double r = std::hypot(std::abs(a), std::abs(b));
  if (r == 0.0) return {1.0, Complex{}};
  if (std::abs(a) == 0.0) return {0.0, std::conj(b) / std::abs(b)};
  const double c = std::abs(a) / r;
  const Complex s = (a / std::abs(a)) * std::conj(b) / r;
  return {c, s};
}

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex tr_half = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = tr_half + disc;
  const Complex l2 = tr_half - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

void qr_step(CMatrix& h, std::size_t lo, std::size_t hi, Complex shift) {
  for (std::size_t k = lo; k <= hi; ++k) h(k, k) -= shift;
  std::vector<Givens> rotations;
  rotations.reserve(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    const Givens g = make_givens(h(k, k), h(k + 1, k));
    rotations.push_back(g);
    for (std::size_t j = k; j <= hi; ++j) {
      const Complex x = h(k, j);
      const Complex y = h(k + 1, j);
      h(k, j) = g.c * x + g.s * y;
      h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
    }
  }
  for (std::size_t k = lo; k < hi; ++k) {
    const Givens& g = rotations[k - lo];
    const std::size_t last = std::min(k + 2, hi);
    for (std::size_t i = lo; i <= last; ++i) {
      const Complex x = h(i, k);
      const Complex y = h(i, k + 1);
      h(i, k) = x * g.c + y * std::conj(g.s);
      h(i, k + 1) = -x * g.s + y * g.c;
    }
  }
  for (std::size_t k = lo; k <= hi; ++k) h(k, k) += shift;
}

}  // namespace

EigenDecomposition eig_hermitian(const CMatrix& a) {
  if (!a.is_square()) throw DimensionError("eig_hermitian: matrix must be square");
  const double defect = hermitian_defect(a);
  if (defect > 1e-12) throw NotHermitianError(defect);

  const std::size_t n = a.rows();
  CMatrix m = a;
  CMatrix v = CMatrix::identity(n);
  const double scale = frob_norm(a);

  double previous_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(m);
    if (scale == 0.0 || off <= kEps * scale || off >= previous_off) break;
    previous_off = off;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = m(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        // Rotation is negligible relative to both diagonal entries.
        if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
            std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
          m(p, q) = 0.0;
          m(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex mkp = m(k, p);
          const Complex mkq = m(k, q);
          m(k, p) = mkp * upp + mkq * uqp;
          m(k, q) = mkp * upq + mkq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex mpk = m(p, k);
          const Complex mqk = m(q, k);
          m(p, k) = std::conj(upp) * mpk + std::conj(uqp) * mqk;
          m(q, k) = std::conj(upq) * mpk + std::conj(uqq) * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        m(p, p) = m(p, p).real();
        m(q, q) = m(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }
  if (scale > 0.0 && off_diagonal_norm(m) > 1e-12 * scale) {
    throw ConvergenceError("Jacobi eigensolver", kJacobiMaxSweeps);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return m(i, i).real() < m(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = m(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

EigenDecomposition eig_general(const CMatrix& a) {
  if (!a.is_square()) throw DimensionError("eig_general: matrix must be square");
  const std::size_t n = a.rows();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  if (n == 0) return out;

  CMatrix h = a;
  reduce_to_hessenberg(h);
  const double hnorm = std::max(frob_norm(h), std::numeric_limits<double>::min());

  const int cap = 60 * static_cast<int>(n);
  int total_iterations = 0;
  std::size_t hi = n - 1;
  int iter_since_deflation = 0;

  while (true) {
    if (hi == 0) {
      out.eigenvalues[0] = h(0, 0);
      break;
    }
    // Locate the start of the unreduced block ending at hi.
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= kEps * (diag > 0.0 ? diag : hnorm)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      out.eigenvalues[hi] = h(hi, hi);
      --hi;
      iter_since_deflation = 0;
      continue;
    }
    if (++total_iterations > cap) throw ConvergenceError("Hessenberg QR eigensolver", cap);
    ++iter_since_deflation;

    Complex shift;
    if (iter_since_deflation % 11 == 0) {
      // Exceptional shift breaks cycles.
      shift = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.75 * std::abs(h(hi, hi - 1)));
    } else {
      shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }
    qr_step(h, lo, hi, shift);
  }
  return out;
}

}  // namespace maxregkit
