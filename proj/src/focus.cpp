#include "fracfocus/focus.hpp"

#include <string>

namespace fracfocus {

FocalStack::FocalStack(std::vector<Field> slides, double z_min, double z_max)
    : slides_(std::move(slides)), z_min_(z_min), z_max_(z_max) {
  if (slides_.size() < 3) throw std::domain_error("a focal stack needs at least 3 slides");
  if (!std::isfinite(z_min_) || !std::isfinite(z_max_) || !(z_max_ > z_min_))
    throw std::domain_error("focal stack requires finite z_min < z_max");
  for (std::size_t k = 1; k < slides_.size(); ++k) {
    if (!slides_[k].same_shape(slides_.front()))
      throw std::invalid_argument("slide " + std::to_string(k) + " differs in size or spacing from slide 0");
  }
}

FocusVolume local_focus_volume(const FocalStack& stack, int q) {
  FocusVolume volume;
  volume.q = q;
  volume.z_min = stack.z_min();
  volume.z_max = stack.z_max();
  volume.layers.reserve(stack.size());
  for (const Field& slide : stack.slides()) volume.layers.push_back(local_modified_laplacian(slide, q));
  return volume;
}

FocusVolume nonlocal_focus_volume(const FocusVolume& local, const Kernel<double>& kernel) {
  if (!local.is_local()) throw std::invalid_argument("nonlocal_focus_volume expects a local focus volume");
  FocusVolume volume = local;
  volume.alpha = kernel.alpha();
  volume.zeta = kernel.zeta();
  if (kernel.alpha() == 0.0) return volume;  // delta kernel
  for (Field& layer : volume.layers) {
    layer = apply_kernel(kernel, layer);
    clear_border(layer, local.q);
  }
  return volume;
}

FocusVolume nonlocal_focus_volume(const FocalStack& stack, int q, double alpha, int zeta) {
  const Kernel<double> kernel = build_kernel(KernelOrder(alpha), zeta);
  return nonlocal_focus_volume(local_focus_volume(stack, q), kernel);
}

int nyquist_hint(double texture_wavelength, double h) {
  if (!(texture_wavelength > 0.0) || !(h > 0.0))
    throw std::domain_error("nyquist_hint needs texture_wavelength > 0 and h > 0");
  const double omega = 1.0 / texture_wavelength;
  return std::max(1, static_cast<int>(std::lround(2.0 / (omega * h))));
}

}  // namespace fracfocus
