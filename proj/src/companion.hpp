#pragma once

// Polynomial roots as eigenvalues of the companion matrix. The variable is
// first rescaled by a power of two so that the constant and leading
// coefficients have comparable size; the (already upper Hessenberg) companion
// matrix then goes through implicit Francis double-shift QR.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>

namespace g0molc::specfun::detail {

template <std::size_t N>
using SquareMatrix = std::array<std::array<double, N>, N>;

// Eigenvalues of an upper Hessenberg matrix (destroyed on exit). Returns
// nullopt if some eigenvalue needs more than 60 sweeps.
template <std::size_t N>
std::optional<std::array<std::complex<double>, N>> hessenberg_eigenvalues(SquareMatrix<N>& h) {
  static_assert(N >= 3);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 60;
  std::array<std::complex<double>, N> ev{};

  int hi = int(N) - 1;
  int sweeps = 0;
  while (hi >= 0) {
    // Deflate at the last negligible subdiagonal entry.
    int l = hi;
    for (; l > 0; --l) {
      const double s = std::abs(h[l - 1][l - 1]) + std::abs(h[l][l]);
      if (std::abs(h[l][l - 1]) <= kEps * s) {
        h[l][l - 1] = 0.0;
        break;
      }
    }
    if (l == hi) {
      ev[hi] = {h[hi][hi], 0.0};
      --hi;
      sweeps = 0;
      continue;
    }
    if (l == hi - 1) {
      const double a = h[hi - 1][hi - 1];
      const double b = h[hi - 1][hi];
      const double c = h[hi][hi - 1];
      const double d = h[hi][hi];
      const double p = 0.5 * (a - d);
      const double q = p * p + b * c;
      if (q >= 0.0) {
        const double z = p + std::copysign(std::sqrt(q), p);
        ev[hi - 1] = {d + z, 0.0};
        ev[hi] = {z != 0.0 ? d - b * c / z : d, 0.0};
      } else {
        const double im = std::sqrt(-q);
        ev[hi - 1] = {d + p, im};
        ev[hi] = {d + p, -im};
      }
      hi -= 2;
      sweeps = 0;
      continue;
    }
    if (++sweeps > kMaxSweeps) return std::nullopt;

    // Shift polynomial s, t: trace and determinant of the trailing 2×2 block,
    // replaced by an ad hoc pair every 11th sweep to break cycles.
    double s = 0.0;
    double t = 0.0;
    if (sweeps % 11 == 10) {
      const double e = std::abs(h[hi][hi - 1]) + std::abs(h[hi - 1][hi - 2]);
      s = 1.5 * e;
      t = e * e;
    } else {
      s = h[hi - 1][hi - 1] + h[hi][hi];
      t = h[hi - 1][hi - 1] * h[hi][hi] - h[hi - 1][hi] * h[hi][hi - 1];
    }
    double x = h[l][l] * h[l][l] + h[l][l + 1] * h[l + 1][l] - s * h[l][l] + t;
    double y = h[l + 1][l] * (h[l][l] + h[l + 1][l + 1] - s);
    double z = h[l + 1][l] * h[l + 2][l + 1];

    // Chase the bulge with 3×3 Householder reflectors.
    for (int k = l; k <= hi - 2; ++k) {
      const double nrm = std::copysign(std::sqrt(x * x + y * y + z * z), x);
      if (nrm != 0.0) {
        const double v0 = x + nrm;
        const double scale = 1.0 / (nrm * v0);
        if (k > l) {
          h[k][k - 1] = -nrm;
          h[k + 1][k - 1] = 0.0;
          h[k + 2][k - 1] = 0.0;
        }
        for (int j = k; j <= hi; ++j) {
          const double p = (v0 * h[k][j] + y * h[k + 1][j] + z * h[k + 2][j]) * scale;
          h[k][j] -= p * v0;
          h[k + 1][j] -= p * y;
          h[k + 2][j] -= p * z;
        }
        const int last = std::min(k + 3, hi);
        for (int i = l; i <= last; ++i) {
          const double p = (v0 * h[i][k] + y * h[i][k + 1] + z * h[i][k + 2]) * scale;
          h[i][k] -= p * v0;
          h[i][k + 1] -= p * y;
          h[i][k + 2] -= p * z;
        }
      }
      x = h[k + 1][k];
      y = h[k + 2][k];
      if (k < hi - 2) z = h[k + 3][k];
    }
    // The last step of the chase is a plane rotation.
    const int k = hi - 1;
    const double r = std::sqrt(x * x + y * y);
    if (r != 0.0) {
      const double c = x / r;
      const double sn = y / r;
      if (k > l) {
        h[k][k - 1] = r;
        h[k + 1][k - 1] = 0.0;
      }
      for (int j = k; j <= hi; ++j) {
        const double a = h[k][j];
        const double b = h[k + 1][j];
        h[k][j] = c * a + sn * b;
        h[k + 1][j] = -sn * a + c * b;
      }
      for (int i = l; i <= hi; ++i) {
        const double a = h[i][k];
        const double b = h[i][k + 1];
        h[i][k] = c * a + sn * b;
        h[i][k + 1] = -sn * a + c * b;
      }
    }
  }
  return ev;
}

// Roots of desc[0]·x^N + desc[1]·x^(N−1) + ... + desc[N], desc[0] != 0 and
// desc[N] != 0. Substituting x = ρ·u with ρ a power of two near
// |desc[N]/desc[0]|^(1/N) is exact in binary arithmetic and evens out the
// coefficients of the monic polynomial in u.
template <std::size_t N>
std::optional<std::array<std::complex<double>, N>> companion_roots(const std::array<double, N + 1>& desc) {
  const double ratio = std::abs(desc[N] / desc[0]);
  int e = 0;
  std::frexp(std::pow(ratio, 1.0 / double(N)), &e);
  const double rho = std::ldexp(1.0, e - 1);

  // Coefficients in the last column, ones on the subdiagonal.
  SquareMatrix<N> m{};
  double inv_pow = 1.0;
  for (std::size_t j = 1; j <= N; ++j) {
    inv_pow /= rho;
    m[N - j][N - 1] = -desc[j] / desc[0] * inv_pow;
  }
  for (std::size_t i = 1; i < N; ++i) m[i][i - 1] = 1.0;

  auto roots = hessenberg_eigenvalues<N>(m);
  if (roots) {
    for (auto& r : *roots) r *= rho;
  }
  return roots;
}

}  // namespace g0molc::specfun::detail
