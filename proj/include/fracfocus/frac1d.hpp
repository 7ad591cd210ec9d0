#pragma once

#include "fracfocus/quadrature.hpp"

#include <functional>
#include <optional>

namespace fracfocus {

/// Fractional order of the one-dimensional operators, 0 <= alpha <= 1.
class FracOrder1D {
 public:
  explicit FracOrder1D(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

/// Analytic test function with an optional exact derivative.
struct Function1D {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // may be empty

  double operator()(double x) const { return value(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
};

enum class DerivativeForm {
  automatic,   ///< derivative form when f' is available, else difference form
  derivative,  ///< I^alpha applied to f'
  difference,  ///< integrated-by-parts form using f only
};

/// Symmetric Liouville integral: (1/Gamma(alpha)) int_0^cutoff xi^(alpha-1) (f(x+xi)+f(x-xi))/2 dxi.
/// alpha = 0 is the unit operator and returns f(x) without quadrature.
double regularized_integral(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad = {});

/// Liouville-Caputo derivative I^alpha f', 0 < alpha < 1.
double regularized_derivative(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad = {},
                              DerivativeForm form = DerivativeForm::automatic);

/// Riesz-type second derivative I^alpha f'' in central-difference form, 0 < alpha < 1.
double riesz_second_derivative(const Function1D& f, double x, FracOrder1D order, const QuadratureSpec& quad = {});

}  // namespace fracfocus
