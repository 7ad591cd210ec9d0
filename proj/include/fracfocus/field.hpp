#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace fracfocus {

/// Regular W x H grid of samples with isotropic spacing h.
///
/// Element (i, j) is the sample at x = x_min + i*h, y = y_min + j*h, so i
/// runs along the image width and j along the height. Storage is
/// column-major with i fastest, which is row-major image order.
template <typename Scalar>
class ScalarField {
 public:
  using Storage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  ScalarField() = default;

  ScalarField(Eigen::Index width, Eigen::Index height, Scalar spacing = Scalar(1))
      : values_(Storage::Zero(width, height)), spacing_(spacing) {
    if (width < 1 || height < 1) throw std::domain_error("ScalarField: width and height must be >= 1");
    if (!(spacing > Scalar(0)) || !std::isfinite(static_cast<double>(spacing)))
      throw std::domain_error("ScalarField: spacing must be finite and > 0");
  }

  template <typename Derived>
  ScalarField(const Eigen::ArrayBase<Derived>& values, Scalar spacing) : ScalarField(values.rows(), values.cols(), spacing) {
    values_ = values;
  }

  Eigen::Index width() const { return values_.rows(); }
  Eigen::Index height() const { return values_.cols(); }
  Scalar spacing() const { return spacing_; }
  bool empty() const { return values_.size() == 0; }

  Scalar& operator()(Eigen::Index i, Eigen::Index j) { return values_(i, j); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

  Storage& values() { return values_; }
  const Storage& values() const { return values_; }

  bool same_shape(const ScalarField& other) const {
    return width() == other.width() && height() == other.height() && spacing_ == other.spacing_;
  }

  bool all_finite() const { return values_.isFinite().all(); }

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.same_shape(b) && (a.values_ == b.values_).all();
  }

 private:
  Storage values_;
  Scalar spacing_ = Scalar(1);
};

using Field = ScalarField<double>;

/// Reflect an out-of-range index back into [0, n) without repeating the edge
/// sample (-1 -> 1, n -> n-2). Works for offsets larger than n.
inline Eigen::Index mirror_index(Eigen::Index k, Eigen::Index n) {
  if (n == 1) return 0;
  const Eigen::Index period = 2 * (n - 1);
  k %= period;
  if (k < 0) k += period;
  return k < n ? k : period - k;
}

}  // namespace fracfocus
