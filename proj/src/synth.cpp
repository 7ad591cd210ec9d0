#include "fracfocus/synth.hpp"

#include "fracfocus/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fracfocus {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform [0, 1) value attached to lattice node (a, b).
double lattice_value(std::uint64_t seed, std::int64_t a, std::int64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(a));
  h = splitmix64(h ^ static_cast<std::uint64_t>(b));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

void SceneSpec::validate() const {
  if (!(half_extent > 0.0)) throw std::domain_error("scene half extent must be > 0");
  if (!(texture_wavelength > 0.0)) throw std::domain_error("texture wavelength must be > 0");
  if (kind == SceneKind::sphere && !(radius > 0.0)) throw std::domain_error("sphere radius must be > 0");
  if (!std::isfinite(height) || !std::isfinite(ramp_low) || !std::isfinite(ramp_high))
    throw std::domain_error("scene heights must be finite");
}

void BlurSpec::validate() const {
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw std::domain_error("sigma0 must be finite and >= 0");
  if (max_radius < 1) throw std::domain_error("blur max_radius must be >= 1");
}

double grid_spacing(const SceneSpec& scene, Eigen::Index width, Eigen::Index height) {
  const Eigen::Index n = std::max(width, height);
  if (n < 2) throw std::domain_error("grid needs at least two samples along one axis");
  return 2.0 * scene.half_extent / static_cast<double>(n - 1);
}

double surface_height(const SceneSpec& scene, double x, double y) {
  switch (scene.kind) {
    case SceneKind::sphere:
      return std::sqrt(std::max(0.0, scene.radius * scene.radius - x * x - y * y));
    case SceneKind::plane:
      return scene.height;
    case SceneKind::ramp:
      return scene.ramp_low + (scene.ramp_high - scene.ramp_low) * (y + scene.half_extent) / (2.0 * scene.half_extent);
  }
  return 0.0;
}

double texture_value(const SceneSpec& scene, double x, double y) {
  const double u = x / scene.texture_wavelength;
  const double v = y / scene.texture_wavelength;
  if (scene.texture == TextureKind::checker) {
    const auto cell = static_cast<std::int64_t>(std::floor(2.0 * u)) + static_cast<std::int64_t>(std::floor(2.0 * v));
    return (cell & 1) == 0 ? 1.0 : 0.0;
  }
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const auto a = static_cast<std::int64_t>(fu);
  const auto b = static_cast<std::int64_t>(fv);
  const double tu = u - fu;
  const double tv = v - fv;
  const double v00 = lattice_value(scene.seed, a, b);
  const double v10 = lattice_value(scene.seed, a + 1, b);
  const double v01 = lattice_value(scene.seed, a, b + 1);
  const double v11 = lattice_value(scene.seed, a + 1, b + 1);
  return (1.0 - tv) * ((1.0 - tu) * v00 + tu * v10) + tv * ((1.0 - tu) * v01 + tu * v11);
}

DepthMap ground_truth(const SceneSpec& scene, Eigen::Index width, Eigen::Index height, double h) {
  scene.validate();
  DepthMap truth(width, height, h);
  truth.method = "truth";
  for (Eigen::Index j = 0; j < height; ++j) {
    const double y = pixel_coordinate(j, height, h);
    for (Eigen::Index i = 0; i < width; ++i) {
      const double x = pixel_coordinate(i, width, h);
      const bool inside = scene.kind != SceneKind::sphere || x * x + y * y <= scene.radius * scene.radius;
      truth.valid(i, j) = inside;
      truth.values(i, j) = inside ? surface_height(scene, x, y) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return truth;
}

namespace {

void check_render_inputs(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height,
                         double h) {
  scene.validate();
  blur.validate();
  if (width < 1 || height < 1 || !(h > 0.0)) throw std::domain_error("invalid grid for rendering");
  if (scene.texture_wavelength < 2.0 * h)
    throw std::domain_error("texture wavelength must be at least two pixels (2h)");
}

// Gathers the texture under a per-pixel normalized Gaussian for each focal
// distance in focal_z.
std::vector<Field> render_slides(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height,
                                 const std::vector<double>& focal_z, double h) {
  Field surface(width, height, h);
  double max_defocus = 0.0;
  for (Eigen::Index j = 0; j < height; ++j) {
    for (Eigen::Index i = 0; i < width; ++i) {
      const double z = surface_height(scene, pixel_coordinate(i, width, h), pixel_coordinate(j, height, h));
      surface(i, j) = z;
      for (const double zk : focal_z) max_defocus = std::max(max_defocus, std::abs(z - zk));
    }
  }

  const int pad = std::min(blur.max_radius, static_cast<int>(std::ceil(4.0 * blur.sigma0 * max_defocus)));
  // Texture sampled on the grid extended by `pad` pixels on every side.
  Field::Storage texture(width + 2 * pad, height + 2 * pad);
  for (Eigen::Index j = 0; j < texture.cols(); ++j) {
    const double y = pixel_coordinate(j - pad, height, h);
    for (Eigen::Index i = 0; i < texture.rows(); ++i)
      texture(i, j) = texture_value(scene, pixel_coordinate(i - pad, width, h), y);
  }

  const auto slices = static_cast<Eigen::Index>(focal_z.size());
  std::vector<Field> out(focal_z.size(), Field(width, height, h));
  parallel_for(slices * height, [&](Eigen::Index task) {
    const auto k = static_cast<std::size_t>(task / height);
    const Eigen::Index j = task % height;
    const double zk = focal_z[k];
    std::vector<double> weights;
    for (Eigen::Index i = 0; i < width; ++i) {
      const double sigma = blur.sigma0 * std::abs(zk - surface(i, j));
      const int radius = std::min(pad, static_cast<int>(std::ceil(4.0 * sigma)));
      if (radius == 0 || sigma == 0.0) {
        out[k](i, j) = texture(i + pad, j + pad);
        continue;
      }
      weights.resize(static_cast<std::size_t>(2 * radius + 1));
      const double inv = -0.5 / (sigma * sigma);
      for (int d = -radius; d <= radius; ++d) weights[static_cast<std::size_t>(d + radius)] = std::exp(inv * d * d);
      double acc = 0.0;
      double norm = 0.0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const double wy = weights[static_cast<std::size_t>(dy + radius)];
        double row = 0.0;
        double row_norm = 0.0;
        for (int dx = -radius; dx <= radius; ++dx) {
          const double wx = weights[static_cast<std::size_t>(dx + radius)];
          row += wx * texture(i + pad + dx, j + pad + dy);
          row_norm += wx;
        }
        acc += wy * row;
        norm += wy * row_norm;
      }
      out[k](i, j) = acc / norm;
    }
  });
  return out;
}

}  // namespace

Field render_slide(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height, double z,
                   double h) {
  check_render_inputs(scene, blur, width, height, h);
  return std::move(render_slides(scene, blur, width, height, {z}, h).front());
}

FocalStack render_stack(const SceneSpec& scene, const BlurSpec& blur, Eigen::Index width, Eigen::Index height, int slices,
                        double z_min, double z_max, double h) {
  check_render_inputs(scene, blur, width, height, h);
  if (slices < 3) throw std::domain_error("a focal stack needs at least 3 slices");
  if (!(z_max > z_min)) throw std::domain_error("render_stack requires z_min < z_max");
  if (scene.kind == SceneKind::plane && (scene.height < z_min || scene.height > z_max))
    throw std::domain_error("plane height must lie inside [z_min, z_max]");

  const double dz = (z_max - z_min) / static_cast<double>(slices - 1);
  std::vector<double> focal_z;
  for (int k = 0; k < slices; ++k) focal_z.push_back(z_min + k * dz);
  return FocalStack(render_slides(scene, blur, width, height, focal_z, h), z_min, z_max);
}

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::sphere: return "sphere";
    case SceneKind::plane: return "plane";
    case SceneKind::ramp: return "ramp";
  }
  return "unknown";
}

std::string to_string(TextureKind kind) { return kind == TextureKind::checker ? "checker" : "value-noise"; }

SceneKind parse_scene_kind(const std::string& name) {
  if (name == "sphere") return SceneKind::sphere;
  if (name == "plane") return SceneKind::plane;
  if (name == "ramp") return SceneKind::ramp;
  throw std::invalid_argument("unknown scene kind '" + name + "' (expected sphere, plane or ramp)");
}

TextureKind parse_texture_kind(const std::string& name) {
  if (name == "checker") return TextureKind::checker;
  if (name == "value-noise" || name == "noise") return TextureKind::value_noise;
  throw std::invalid_argument("unknown texture kind '" + name + "' (expected checker or value-noise)");
}

}  // namespace fracfocus
