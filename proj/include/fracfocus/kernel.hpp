#pragma once

#include "fracfocus/field.hpp"
#include "fracfocus/parallel.hpp"
#include "fracfocus/quadrature.hpp"

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace fracfocus {

/// Order of the 2D nonlocalization operator, 0 <= alpha <= 2.
class KernelOrder {
 public:
  explicit KernelOrder(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Discrete nonlocalization matrix M(alpha) on offsets [-zeta, zeta]^2,
/// normalized to M(0,0) = 1.
template <typename Scalar>
class Kernel {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Kernel(double alpha, int zeta, Matrix weights) : alpha_(alpha), zeta_(zeta), weights_(std::move(weights)) {
    if (zeta < 1) throw std::domain_error("kernel cutoff zeta must be >= 1");
    if (weights_.rows() != 2 * zeta + 1 || weights_.cols() != 2 * zeta + 1)
      throw std::invalid_argument("kernel weights must be (2 zeta + 1) x (2 zeta + 1)");
  }

  double alpha() const { return alpha_; }
  int zeta() const { return zeta_; }
  int size() const { return 2 * zeta_ + 1; }

  /// Weight at signed offset (i, j), |i|, |j| <= zeta.
  Scalar operator()(int i, int j) const { return weights_(i + zeta_, j + zeta_); }
  const Matrix& weights() const { return weights_; }

  template <typename Other>
  Kernel<Other> cast() const {
    return Kernel<Other>(alpha_, zeta_, weights_.template cast<Other>());
  }

 private:
  double alpha_;
  int zeta_;
  Matrix weights_;
};

/// Integrates (xi1^2 + xi2^2)^((alpha-2)/2) over every unit pixel cell
/// [i-1/2, i+1/2] x [j-1/2, j+1/2] and divides by the center cell.
Kernel<double> build_kernel(KernelOrder alpha, int zeta, const QuadratureSpec& quad = {});

/// Integral of r^(alpha-2) over [0, X] x [0, Y]; exposed for testing.
double corner_integral(double alpha, double x, double y, const QuadratureSpec& quad = {});

/// out(x, y) = sum_{i,j} M(i,j) f(x+i, y+j) with mirrored borders. Not
/// normalized by the kernel sum.
template <typename Scalar>
ScalarField<Scalar> apply_kernel(const Kernel<Scalar>& kernel, const ScalarField<Scalar>& field) {
  const Eigen::Index width = field.width();
  const Eigen::Index height = field.height();
  const int zeta = kernel.zeta();
  ScalarField<Scalar> out(width, height, field.spacing());

  parallel_for(height, [&](Eigen::Index y) {
    for (Eigen::Index x = 0; x < width; ++x) {
      Scalar acc(0);
      for (int i = -zeta; i <= zeta; ++i) {
        const Eigen::Index xi = mirror_index(x + i, width);
        for (int j = -zeta; j <= zeta; ++j) {
          acc += kernel(i, j) * field(xi, mirror_index(y + j, height));
        }
      }
      out(x, y) = acc;
    }
  });
  return out;
}

/// Response of the kernel to cos(k1 x) cos(k2 y): sum M(i,j) cos(k1 i h) cos(k2 j h).
template <typename Scalar>
Scalar kernel_frequency_response(const Kernel<Scalar>& kernel, double k1, double k2, double h = 1.0) {
  const int zeta = kernel.zeta();
  Scalar acc(0);
  for (int i = -zeta; i <= zeta; ++i) {
    const double ci = std::cos(k1 * i * h);
    for (int j = -zeta; j <= zeta; ++j) acc += kernel(i, j) * Scalar(ci * std::cos(k2 * j * h));
  }
  return acc;
}

}  // namespace fracfocus
