#include "fracfocus/frac1d.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracfocus {
namespace {

// Below these offsets the difference quotients are replaced by their value
// at the floor, which balances truncation against cancellation.
const double kFirstDifferenceFloor = std::cbrt(std::numeric_limits<double>::epsilon());
const double kSecondDifferenceFloor = std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));

void require_open_order(double alpha, const char* op) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error(std::string(op) + ": alpha must lie in (0, 1), got " + std::to_string(alpha));
}

// (1/Gamma(alpha)) int_0^c xi^(alpha-1) g(xi) dxi with u = xi^alpha, which
// turns the weight into the constant 1/alpha:
//   = 1/Gamma(alpha+1) int_0^(c^alpha) g(u^(1/alpha)) du.
double weighted_integral(const std::function<double(double)>& g, double alpha, const QuadratureSpec& quad) {
  const double inv_alpha = 1.0 / alpha;
  const double upper = std::pow(quad.cutoff, alpha);
  auto integrand = [&](double u) { return g(std::pow(u, inv_alpha)); };
  return integrate_adaptive(integrand, 0.0, upper, quad) / std::tgamma(alpha + 1.0);
}

}  // namespace

FracOrder1D::FracOrder1D(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::domain_error("fractional order must lie in [0, 1], got " + std::to_string(alpha));
}

double regularized_integral(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad) {
  quad.validate();
  const double alpha = order.value();
  if (alpha == 0.0) return f(x);
  auto shift = [&](double xi) { return 0.5 * (f(x + xi) + f(x - xi)); };
  return weighted_integral(shift, alpha, quad);
}

double regularized_derivative(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad,
                              DerivativeForm form) {
  quad.validate();
  const double alpha = order.value();
  require_open_order(alpha, "regularized_derivative");

  if (form == DerivativeForm::automatic)
    form = f.has_derivative() ? DerivativeForm::derivative : DerivativeForm::difference;

  if (form == DerivativeForm::derivative) {
    if (!f.has_derivative()) throw std::invalid_argument("regularized_derivative: derivative form needs f'");
    auto shift = [&](double xi) { return 0.5 * (f.derivative(x + xi) + f.derivative(x - xi)); };
    return weighted_integral(shift, alpha, quad);
  }

  auto quotient = [&](double xi) {
    xi = std::max(xi, kFirstDifferenceFloor);
    return (f(x + xi) - f(x - xi)) / (2.0 * xi);
  };
  return (1.0 - alpha) * weighted_integral(quotient, alpha, quad);
}

double riesz_second_derivative(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad) {
  quad.validate();
  const double alpha = order.value();
  require_open_order(alpha, "riesz_second_derivative");

  // Two integrations by parts of I^alpha f'' give the prefactor
  // (1-alpha)(2-alpha)/2.
  const double fx = f(x);
  auto quotient = [&](double xi) {
    xi = std::max(xi, kSecondDifferenceFloor);
    return (f(x + xi) - 2.0 * fx + f(x - xi)) / (xi * xi);
  };
  const double body = weighted_integral(quotient, alpha, quad);
  // -2 f(x) does not decay; its tail beyond the cutoff is exact.
  const double tail = -2.0 * fx * std::pow(quad.cutoff, alpha - 2.0) / (2.0 - alpha) / std::tgamma(alpha);
  return 0.5 * (1.0 - alpha) * (2.0 - alpha) * (body + tail);
}

}  // namespace fracfocus
