#include "fracfocus/eval.hpp"

#include "fracfocus/synth.hpp"

#include <cmath>
#include <cstring>

namespace fracfocus {
namespace {

void require_same_grid(const DepthMap& a, const DepthMap& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("depth maps differ in dimensions");
}

}  // namespace

ErrorReport rms_error_percent(const DepthMap& recovered, const DepthMap& truth, double z_range) {
  require_same_grid(recovered, truth);
  if (!(z_range > 0.0)) throw std::domain_error("z_range must be > 0");

  double sum = 0.0;
  Eigen::Index count = 0;
  for (Eigen::Index j = 0; j < truth.height(); ++j) {
    for (Eigen::Index i = 0; i < truth.width(); ++i) {
      if (!recovered.valid(i, j) || !truth.valid(i, j)) continue;
      const double e = recovered.values(i, j) - truth.values(i, j);
      sum += e * e;
      ++count;
    }
  }
  if (count == 0) throw EmptyMaskError("no pixel is valid in both depth maps");

  ErrorReport report;
  report.rms_percent = 100.0 * std::sqrt(sum / static_cast<double>(count)) / z_range;
  report.pixel_count = count;
  report.method = recovered.method;
  report.q = recovered.q;
  report.alpha = recovered.alpha;
  report.zeta = recovered.zeta;
  return report;
}

ComparisonTable comparison_table(const FocalStack& stack, const DepthMap& truth, int q, const std::vector<double>& alphas,
                                 const std::vector<int>& zetas, std::vector<int> local_steps) {
  if (alphas.empty() || zetas.empty()) throw std::invalid_argument("comparison_table needs non-empty alpha and zeta lists");
  if (local_steps.empty()) local_steps = zetas;

  ComparisonTable table;
  table.q = q;
  table.zetas = zetas;
  table.alphas = alphas;
  table.local_steps = local_steps;
  table.z_range = stack.z_max() - stack.z_min();

  const FocusVolume local = local_focus_volume(stack, q);
  for (const int zeta : zetas) {
    std::vector<ErrorReport> row;
    row.reserve(alphas.size());
    for (const double alpha : alphas) {
      const FocusVolume volume = nonlocal_focus_volume(local, build_kernel(KernelOrder(alpha), zeta));
      row.push_back(rms_error_percent(recover_depth(volume), truth, table.z_range));
    }
    table.grid.push_back(std::move(row));
  }
  for (const int step : local_steps) {
    const FocusVolume volume = step == q ? local : local_focus_volume(stack, step);
    table.local.push_back(rms_error_percent(recover_depth(volume), truth, table.z_range));
  }
  return table;
}

std::vector<ProfilePoint> axis_profile(const DepthMap& recovered, const DepthMap& truth, Axis axis) {
  require_same_grid(recovered, truth);
  const Eigen::Index width = truth.width();
  const Eigen::Index height = truth.height();
  const double h = truth.values.spacing();
  std::vector<ProfilePoint> profile;

  const Eigen::Index n = axis == Axis::x ? width : height;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = axis == Axis::x ? k : (width - 1) / 2;
    const Eigen::Index j = axis == Axis::x ? (height - 1) / 2 : k;
    if (!recovered.valid(i, j) || !truth.valid(i, j)) continue;
    profile.push_back({pixel_coordinate(k, n, h), recovered.values(i, j), truth.values(i, j)});
  }
  return profile;
}

bool identical(const DepthMap& a, const DepthMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) return false;
  if (!(a.valid == b.valid).all()) return false;
  const auto bytes = static_cast<std::size_t>(a.values.values().size()) * sizeof(double);
  return std::memcmp(a.values.values().data(), b.values.values().data(), bytes) == 0;
}

}  // namespace fracfocus
