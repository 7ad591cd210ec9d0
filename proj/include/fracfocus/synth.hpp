#pragma once

#include "fracfocus/depth.hpp"
#include "fracfocus/focus.hpp"

#include <cstdint>
#include <string>

namespace fracfocus {

enum class SceneKind { sphere, plane, ramp };
enum class TextureKind { checker, value_noise };

/// Textured surface Z(x, y) over the square [-half_extent, half_extent]^2.
struct SceneSpec {
  SceneKind kind = SceneKind::sphere;
  double radius = 1.0;       ///< sphere centered at the origin of the z = 0 plane
  double height = 0.5;       ///< plane
  double ramp_low = 0.0;     ///< ramp height at y = -half_extent
  double ramp_high = 1.0;    ///< ramp height at y = +half_extent
  double half_extent = 1.25;
  double texture_wavelength = 0.02;
  TextureKind texture = TextureKind::value_noise;
  std::uint64_t seed = 7;

  void validate() const;
};

/// Gaussian defocus: sigma = sigma0 * |z_k - Z(x, y)| pixels.
struct BlurSpec {
  double sigma0 = 6.0;
  int max_radius = 64;

  void validate() const;
};

/// Pixel pitch that makes a width x height grid span the scene square along
/// its longer side.
double grid_spacing(const SceneSpec& scene, Eigen::Index width, Eigen::Index height);

/// Physical coordinate of pixel index k on an n-sample axis centered at 0.
inline double pixel_coordinate(Eigen::Index k, Eigen::Index n, double h) {
  return (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1)) * h;
}

/// Surface height including the z = 0 background around a sphere.
double surface_height(const SceneSpec& scene, double x, double y);

/// Texture intensity in [0, 1].
double texture_value(const SceneSpec& scene, double x, double y);

DepthMap ground_truth(const SceneSpec& scene, Eigen::Index width, Eigen::Index height, double h);

/// Single slide focused at z.
Field render_slide(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height, double z,
                   double h);

FocalStack render_stack(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height, int slices,
                        double z_min, double z_max, double h);

std::string to_string(SceneKind kind);
std::string to_string(TextureKind kind);
SceneKind parse_scene_kind(const std::string& name);
TextureKind parse_texture_kind(const std::string& name);

}  // namespace fracfocus
