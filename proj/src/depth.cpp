#include "fracfocus/depth.hpp"

#include "fracfocus/parallel.hpp"

#include <stdexcept>

namespace fracfocus {

DepthMap recover_depth(const FocusVolume& volume, PeakTolerance tol) {
  const std::size_t n = volume.size();
  if (n < 3) throw std::domain_error("depth recovery needs at least 3 focus layers");
  const Field& first = volume.layers.front();
  for (const Field& layer : volume.layers) {
    if (!layer.same_shape(first)) throw std::invalid_argument("focus layers differ in shape");
  }

  DepthMap depth(first.width(), first.height(), first.spacing());
  depth.method = volume.is_local() ? "local" : "nonlocal";
  depth.q = volume.q;
  depth.alpha = volume.alpha;
  depth.zeta = volume.zeta;

  const double dz = volume.delta_z();
  parallel_for(first.height(), [&](Eigen::Index j) {
    for (Eigen::Index i = 0; i < first.width(); ++i) {
      std::size_t best = 0;
      double peak = volume.layers[0](i, j);
      for (std::size_t k = 1; k < n; ++k) {
        const double v = volume.layers[k](i, j);
        if (v > peak) {
          peak = v;
          best = k;
        }
      }
      if (!(peak > 0.0)) {
        depth.values(i, j) = std::nan("");
        continue;
      }
      double index = static_cast<double>(best);
      if (best > 0 && best + 1 < n) {
        index += parabolic_peak(volume.layers[best - 1](i, j), peak, volume.layers[best + 1](i, j), tol).offset;
      }
      depth.values(i, j) = volume.z_min + index * dz;
      depth.valid(i, j) = true;
    }
  });
  return depth;
}

}  // namespace fracfocus
