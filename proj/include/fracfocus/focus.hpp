#pragma once

#include "fracfocus/field.hpp"
#include "fracfocus/kernel.hpp"
#include "fracfocus/parallel.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fracfocus {

/// Slides at uniformly spaced focal distances z_min ... z_max.
class FocalStack {
 public:
  FocalStack(std::vector<Field> slides, double z_min, double z_max);

  std::size_t size() const { return slides_.size(); }
  const Field& operator[](std::size_t k) const { return slides_[k]; }
  const std::vector<Field>& slides() const { return slides_; }

  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  double delta_z() const { return (z_max_ - z_min_) / static_cast<double>(slides_.size() - 1); }
  double z(std::size_t k) const { return z_min_ + static_cast<double>(k) * delta_z(); }

  Eigen::Index width() const { return slides_.front().width(); }
  Eigen::Index height() const { return slides_.front().height(); }
  double spacing() const { return slides_.front().spacing(); }

 private:
  std::vector<Field> slides_;
  double z_min_;
  double z_max_;
};

/// One focus-measure layer per slide. alpha/zeta are absent for the local
/// measure.
struct FocusVolume {
  std::vector<Field> layers;
  int q = 1;
  std::optional<double> alpha;
  std::optional<int> zeta;
  double z_min = 0.0;
  double z_max = 1.0;

  std::size_t size() const { return layers.size(); }
  bool is_local() const { return !alpha.has_value(); }
  double delta_z() const { return (z_max - z_min) / static_cast<double>(layers.size() - 1); }
};

/// |f(i+q,j) - 2f(i,j) + f(i-q,j)| / (qh)^2 + |f(i,j+q) - 2f(i,j) + f(i,j-q)| / (qh)^2
/// on the interior, exactly zero on the border frame of width q.
template <typename Scalar>
ScalarField<Scalar> local_modified_laplacian(const ScalarField<Scalar>& slide, int q) {
  if (q < 1) throw std::domain_error("modified Laplacian step q must be >= 1");
  const Eigen::Index width = slide.width();
  const Eigen::Index height = slide.height();
  if (width <= 2 * q || height <= 2 * q)
    throw std::domain_error("slide is too small for modified Laplacian step q = " + std::to_string(q));

  const Scalar step = Scalar(q) * slide.spacing();
  const Scalar inv_step2 = Scalar(1) / (step * step);
  ScalarField<Scalar> out(width, height, slide.spacing());
  parallel_for(height - 2 * q, [&](Eigen::Index row) {
    const Eigen::Index j = row + q;
    for (Eigen::Index i = q; i < width - q; ++i) {
      const Scalar center = Scalar(2) * slide(i, j);
      const Scalar dxx = slide(i + q, j) - center + slide(i - q, j);
      const Scalar dyy = slide(i, j + q) - center + slide(i, j - q);
      out(i, j) = std::abs(dxx * inv_step2) + std::abs(dyy * inv_step2);
    }
  });
  return out;
}

/// Zeroes the border frame of width q.
template <typename Scalar>
void clear_border(ScalarField<Scalar>& field, int q) {
  const Eigen::Index width = field.width();
  const Eigen::Index height = field.height();
  const Eigen::Index bx = std::min<Eigen::Index>(q, width);
  const Eigen::Index by = std::min<Eigen::Index>(q, height);
  field.values().topRows(bx).setZero();
  field.values().bottomRows(bx).setZero();
  field.values().leftCols(by).setZero();
  field.values().rightCols(by).setZero();
}

FocusVolume local_focus_volume(const FocalStack& stack, int q);

/// Local modified Laplacian followed by the nonlocalization kernel; the
/// width-q zero frame is restored afterwards.
FocusVolume nonlocal_focus_volume(const FocalStack& stack, int q, double alpha, int zeta);

/// Same, with a prebuilt kernel and a precomputed local volume.
FocusVolume nonlocal_focus_volume(const FocusVolume& local, const Kernel<double>& kernel);

/// round(2 / (omega h)) with omega = 1 / texture_wavelength, at least 1.
int nyquist_hint(double texture_wavelength, double h);

}  // namespace fracfocus
