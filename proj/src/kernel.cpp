#include "fracfocus/kernel.hpp"

#include <numbers>
#include <string>

namespace fracfocus {
namespace {

double signed_corner(double alpha, double x, double y, const QuadratureSpec& quad) {
  const double sx = x < 0.0 ? -1.0 : 1.0;
  const double sy = y < 0.0 ? -1.0 : 1.0;
  return sx * sy * corner_integral(alpha, std::abs(x), std::abs(y), quad);
}

// Integral of r^(alpha-2) over [x0, x1] x [y0, y1] by inclusion-exclusion of
// corner integrals; the integrand is even in both coordinates.
double cell_integral(double alpha, double x0, double x1, double y0, double y1, const QuadratureSpec& quad) {
  return signed_corner(alpha, x1, y1, quad) - signed_corner(alpha, x0, y1, quad) -
         signed_corner(alpha, x1, y0, quad) + signed_corner(alpha, x0, y0, quad);
}

}  // namespace

KernelOrder::KernelOrder(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 2.0))
    throw std::domain_error("kernel order alpha must lie in [0, 2], got " + std::to_string(alpha));
}

double corner_integral(double alpha, double x, double y, const QuadratureSpec& quad) {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  // Polar form: the radial integral of r^(alpha-1) is closed, leaving smooth
  // angular integrals on either side of the diagonal theta0.
  const double theta0 = std::atan2(y, x);
  auto below = [&](double t) { return std::pow(x / std::cos(t), alpha); };
  auto above = [&](double t) { return std::pow(y / std::sin(t), alpha); };
  return (integrate_adaptive(below, 0.0, theta0, quad) +
          integrate_adaptive(above, theta0, std::numbers::pi / 2.0, quad)) /
         alpha;
}

Kernel<double> build_kernel(KernelOrder order, int zeta, const QuadratureSpec& quad) {
  if (zeta < 1) throw std::domain_error("kernel cutoff zeta must be >= 1, got " + std::to_string(zeta));
  quad.validate();
  const double alpha = order.value();
  const int n = 2 * zeta + 1;
  Kernel<double>::Matrix weights = Kernel<double>::Matrix::Zero(n, n);

  if (alpha == 0.0) {
    weights(zeta, zeta) = 1.0;
    return {alpha, zeta, std::move(weights)};
  }
  if (alpha == 2.0) {
    weights.setOnes();
    return {alpha, zeta, std::move(weights)};
  }

  const double center = cell_integral(alpha, -0.5, 0.5, -0.5, 0.5, quad);
  for (int i = 0; i <= zeta; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double w = (i == 0 && j == 0) ? 1.0 : cell_integral(alpha, i - 0.5, i + 0.5, j - 0.5, j + 0.5, quad) / center;
      for (const int si : {-1, 1}) {
        for (const int sj : {-1, 1}) {
          weights(zeta + si * i, zeta + sj * j) = w;
          weights(zeta + si * j, zeta + sj * i) = w;
        }
      }
    }
  }
  return {alpha, zeta, std::move(weights)};
}

}  // namespace fracfocus
