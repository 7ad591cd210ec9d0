#pragma once

// Independent reference computations for the unit and acceptance tests.
// Deliberately simple composite rules; none of these share code paths with
// the library's adaptive quadrature.

#include <cmath>
#include <functional>

namespace oracle {

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int k = 1; k < n; ++k) sum += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Composite trapezoid on [a, b] with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < n; ++k) sum += f(a + k * h);
  return sum * h;
}

/// (1/Gamma(alpha)) int_0^c xi^(alpha-1) g(xi) dxi through u = xi^alpha and
/// dense Simpson; g must be bounded.
inline double weighted(const std::function<double(double)>& g, double alpha, double cutoff, int n = 400000) {
  const double upper = std::pow(cutoff, alpha);
  auto integrand = [&](double u) { return g(u == 0.0 ? 0.0 : std::pow(u, 1.0 / alpha)); };
  return simpson(integrand, 0.0, upper, n) / std::tgamma(alpha + 1.0);
}

/// Integral of (x^2 + y^2)^((alpha-2)/2) over a rectangle that stays away
/// from the origin, by quadtree subdivision of 8x8 tensor Gauss-Legendre panels.
inline double gauss_legendre_cell(double alpha, double x0, double x1, double y0, double y1) {
  static const double nodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                  0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double weights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
  const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
  double sum = 0.0;
  for (int a = 0; a < 8; ++a) {
    const double x = cx + hx * nodes[a];
    for (int b = 0; b < 8; ++b) {
      const double y = cy + hy * nodes[b];
      sum += weights[a] * weights[b] * std::pow(x * x + y * y, 0.5 * (alpha - 2.0));
    }
  }
  return sum * hx * hy;
}

inline double quadtree_cell(double alpha, double x0, double x1, double y0, double y1, int depth = 0) {
  const double coarse = gauss_legendre_cell(alpha, x0, x1, y0, y1);
  const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
  const double fine = gauss_legendre_cell(alpha, x0, mx, y0, my) + gauss_legendre_cell(alpha, mx, x1, y0, my) +
                      gauss_legendre_cell(alpha, x0, mx, my, y1) + gauss_legendre_cell(alpha, mx, x1, my, y1);
  if (std::abs(fine - coarse) < 1e-13 * std::abs(fine) || depth >= 10) return fine;
  return quadtree_cell(alpha, x0, mx, y0, my, depth + 1) + quadtree_cell(alpha, mx, x1, y0, my, depth + 1) +
         quadtree_cell(alpha, x0, mx, my, y1, depth + 1) + quadtree_cell(alpha, mx, x1, my, y1, depth + 1);
}

/// Integral over the unit corner square [0, 1]^2. Self-similarity gives
/// F(s, s) = s^alpha F(1, 1), so F(1, 1) follows from the non-singular
/// L-shaped region [0, 1]^2 minus [0, 1/2]^2.
inline double unit_corner(double alpha) {
  const double l_shape = quadtree_cell(alpha, 0.5, 1.0, 0.0, 0.5) + quadtree_cell(alpha, 0.0, 0.5, 0.5, 1.0) +
                         quadtree_cell(alpha, 0.5, 1.0, 0.5, 1.0);
  return l_shape / (1.0 - std::pow(2.0, -alpha));
}

/// Unnormalized pixel-cell integral at offset (i, j), cell [i-1/2, i+1/2] x [j-1/2, j+1/2].
inline double pixel_cell(double alpha, int i, int j) {
  if (i == 0 && j == 0) return 4.0 * std::pow(0.5, alpha) * unit_corner(alpha);
  if (i == 0 || j == 0) {
    // Cell straddles an axis: split at the axis so each half avoids the origin.
    const int k = i == 0 ? std::abs(j) : std::abs(i);
    return 2.0 * quadtree_cell(alpha, 0.0, 0.5, k - 0.5, k + 0.5);
  }
  return quadtree_cell(alpha, std::abs(i) - 0.5, std::abs(i) + 0.5, std::abs(j) - 0.5, std::abs(j) + 0.5);
}

}  // namespace oracle
