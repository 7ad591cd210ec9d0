#pragma once

#include "fracfocus/depth.hpp"
#include "fracfocus/focus.hpp"
#include "fracfocus/kernel.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace fracfocus::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary P5, maxval 255; values in [lo, hi] map linearly onto 0..255.
void write_pgm(const std::filesystem::path& path, const Field& field, double lo = 0.0, double hi = 1.0);
/// Reads a P5 image (maxval <= 255) into [0, 1].
Field read_pgm(const std::filesystem::path& path, double spacing);
/// PGM preview rescaled to the finite value range; NaN maps to 0.
void write_pgm_preview(const std::filesystem::path& path, const Field& field);

/// One CSV line per image row j, 17 significant digits, NaN token for NaN.
void write_field_csv(const std::filesystem::path& path, const Field& field);
Field read_field_csv(const std::filesystem::path& path, double spacing);

/// Depth CSV (invalid pixels as NaN) plus a JSON sidecar with parameters.
void write_depth(const std::filesystem::path& csv_path, const DepthMap& depth, const nlohmann::json& extra = {});
DepthMap read_depth(const std::filesystem::path& csv_path, double spacing = 1.0);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Stack directory: slide_000.pgm ... (or .csv when lossless), stack.json.
void write_stack(const std::filesystem::path& dir, const FocalStack& stack, nlohmann::json metadata, bool lossless);
FocalStack read_stack(const std::filesystem::path& dir);
std::string slide_name(std::size_t k, bool lossless);

std::string kernel_csv(const Kernel<double>& kernel);
nlohmann::json kernel_json(const Kernel<double>& kernel);

/// Shortest decimal that round-trips a double ("NaN" for NaN).
std::string format_lossless(double v);

}  // namespace fracfocus::io
