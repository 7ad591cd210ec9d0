#include "fracfocus/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace fracfocus {

void QuadratureSpec::validate() const {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::domain_error("quadrature cutoff must be finite and > 0");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::domain_error("quadrature rel_tol must lie in (0, 1)");
  if (max_subdivisions < 1) throw std::domain_error("quadrature max_subdivisions must be >= 1");
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& quad) {
  quad.validate();
  if (a == b) return 0.0;

  // Bisection tree of depth d has at most 2^d leaves.
  const auto depth = static_cast<unsigned>(std::ceil(std::log2(static_cast<double>(quad.max_subdivisions))));
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, depth, quad.rel_tol, &error, &l1);

  if (!std::isfinite(value)) throw QuadratureError("quadrature produced a non-finite value");
  const double scale = std::max(std::abs(value), l1);
  if (error > quad.rel_tol * scale) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << error << " exceeds "
        << quad.rel_tol << " * " << scale << " within " << quad.max_subdivisions << " subdivisions";
    throw QuadratureError(msg.str());
  }
  return value;
}

}  // namespace fracfocus
