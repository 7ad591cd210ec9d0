#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace fracfocus {

/// Truncated-domain adaptive quadrature settings.
struct QuadratureSpec {
  double cutoff = 8.0;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  void validate() const;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod integral of a bounded integrand over [a, b].
/// Throws QuadratureError if the error estimate is still above
/// rel_tol * L1 after max_subdivisions intervals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& quad);

}  // namespace fracfocus
