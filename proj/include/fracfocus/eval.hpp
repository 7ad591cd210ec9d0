#pragma once

#include "fracfocus/depth.hpp"
#include "fracfocus/focus.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracfocus {

class EmptyMaskError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RMS depth error in percent of the z range, over jointly valid pixels.
struct ErrorReport {
  double rms_percent = 0.0;
  Eigen::Index pixel_count = 0;
  std::string method;
  int q = 0;
  std::optional<double> alpha;
  std::optional<int> zeta;
};

ErrorReport rms_error_percent(const DepthMap& recovered, const DepthMap& truth, double z_range);

/// Nonlocal errors for every (zeta, alpha) at a fixed q, plus local errors for
/// each step in local_steps.
struct ComparisonTable {
  int q = 1;
  std::vector<int> zetas;
  std::vector<double> alphas;
  std::vector<std::vector<ErrorReport>> grid;  // grid[row = zeta][col = alpha]
  std::vector<int> local_steps;
  std::vector<ErrorReport> local;              // one per local step
  double z_range = 1.0;
};

/// local_steps defaults to the zeta list (one local step per table row).
ComparisonTable comparison_table(const FocalStack& stack, const DepthMap& truth, int q, const std::vector<double>& alphas,
                                 const std::vector<int>& zetas, std::vector<int> local_steps = {});

enum class Axis { x, y };

struct ProfilePoint {
  double coordinate;
  double recovered;
  double truth;
};

/// Samples along the central line of the chosen axis, skipping pixels that are
/// invalid in either map.
std::vector<ProfilePoint> axis_profile(const DepthMap& recovered, const DepthMap& truth, Axis axis);

/// Bit-level equality of values and masks (NaN payloads included).
bool identical(const DepthMap& a, const DepthMap& b);

}  // namespace fracfocus
