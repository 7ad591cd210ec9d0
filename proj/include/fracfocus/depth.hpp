#pragma once

#include "fracfocus/field.hpp"
#include "fracfocus/focus.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace fracfocus {

/// Per-pixel depth with a validity mask and the parameters that produced it.
struct DepthMap {
  using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  Field values;
  Mask valid;
  std::string method;  // "local", "nonlocal" or "truth"
  int q = 0;
  std::optional<double> alpha;
  std::optional<int> zeta;

  DepthMap() = default;
  DepthMap(Eigen::Index width, Eigen::Index height, double spacing)
      : values(width, height, spacing), valid(Mask::Constant(width, height, false)) {}

  Eigen::Index width() const { return values.width(); }
  Eigen::Index height() const { return values.height(); }
  Eigen::Index valid_count() const { return valid.count(); }
};

struct PeakOffset {
  double offset = 0.0;  ///< slice units, clamped to [-1/2, 1/2]
  bool degenerate = false;
};

struct PeakTolerance {
  double relative = 1e-12;
  double absolute = 1e-300;
};

/// Vertex of the parabola through (-1, minus), (0, center), (+1, plus).
template <typename Scalar>
PeakOffset parabolic_peak(Scalar minus, Scalar center, Scalar plus, PeakTolerance tol = {}) {
  const double m = static_cast<double>(minus);
  const double c = static_cast<double>(center);
  const double p = static_cast<double>(plus);
  const double denom = p - 2.0 * c + m;
  const double scale = std::max({std::abs(m), std::abs(c), std::abs(p), tol.absolute});
  if (!(std::abs(denom) > tol.relative * scale)) return {0.0, true};
  const double offset = -0.5 * (p - m) / denom;
  if (!std::isfinite(offset)) return {0.0, true};
  return {std::clamp(offset, -0.5, 0.5), false};
}

/// Argmax over slices (ties to the lowest index) refined by a parabolic fit.
/// Edge maxima fall back to the slice position; all-zero columns are invalid.
DepthMap recover_depth(const FocusVolume& volume, PeakTolerance tol = {});

}  // namespace fracfocus
