#include "fracfocus/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace fracfocus::io {
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

// Next whitespace-delimited PNM header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c) != 0) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

long parse_positive(const std::string& token, const fs::path& path) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value <= 0)
    throw FormatError("'" + path.string() + "': bad PGM header field '" + token + "'");
  return value;
}

double parse_number(const std::string& cell, const fs::path& path, std::size_t line) {
  std::string s = cell;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start])) != 0) ++start;
  s = s.substr(start);
  if (s == "NaN" || s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw FormatError("'" + path.string() + "' line " + std::to_string(line) + ": bad number '" + cell + "'");
  return value;
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
nlohmann::json optional_json(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_lossless(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_pgm(const fs::path& path, const Field& field, double lo, double hi) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << field.width() << ' ' << field.height() << "\n255\n";
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::vector<unsigned char> row(static_cast<std::size_t>(field.width()));
  for (Eigen::Index j = 0; j < field.height(); ++j) {
    for (Eigen::Index i = 0; i < field.width(); ++i) {
      const double v = field(i, j);
      const double level = std::isfinite(v) ? std::clamp((v - lo) * scale, 0.0, 255.0) : 0.0;
      row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(level));
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_pgm_preview(const fs::path& path, const Field& field) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : field.values().reshaped()) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  write_pgm(path, field, lo, hi);
}

Field read_pgm(const fs::path& path, double spacing) {
  std::ifstream in = open_in(path, std::ios::in | std::ios::binary);
  if (pnm_token(in) != "P5") throw FormatError("'" + path.string() + "': not a binary PGM (P5)");
  const long width = parse_positive(pnm_token(in), path);
  const long height = parse_positive(pnm_token(in), path);
  const long maxval = parse_positive(pnm_token(in), path);
  if (maxval > 255) throw FormatError("'" + path.string() + "': only 8-bit PGM is supported");

  Field field(width, height, spacing);
  std::vector<unsigned char> row(static_cast<std::size_t>(width));
  for (long j = 0; j < height; ++j) {
    in.read(reinterpret_cast<char*>(row.data()), width);
    if (in.gcount() != width) throw FormatError("'" + path.string() + "': truncated pixel data");
    for (long i = 0; i < width; ++i) field(i, j) = row[static_cast<std::size_t>(i)] / static_cast<double>(maxval);
  }
  return field;
}

void write_field_csv(const fs::path& path, const Field& field) {
  std::ofstream out = open_out(path);
  std::string line;
  for (Eigen::Index j = 0; j < field.height(); ++j) {
    line.clear();
    for (Eigen::Index i = 0; i < field.width(); ++i) {
      if (i > 0) line.push_back(',');
      line += format_lossless(field(i, j));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Field read_field_csv(const fs::path& path, double spacing) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(parse_number(cell, path, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError("'" + path.string() + "' line " + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw FormatError("'" + path.string() + "': empty CSV");

  Field field(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()), spacing);
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i)
      field(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return field;
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_depth(const fs::path& csv_path, const DepthMap& depth, const nlohmann::json& extra) {
  Field out = depth.values;
  for (Eigen::Index j = 0; j < out.height(); ++j)
    for (Eigen::Index i = 0; i < out.width(); ++i)
      if (!depth.valid(i, j)) out(i, j) = std::numeric_limits<double>::quiet_NaN();
  write_field_csv(csv_path, out);

  nlohmann::json meta = extra.is_object() ? extra : nlohmann::json::object();
  meta["method"] = depth.method;
  meta["q"] = depth.q;
  meta["alpha"] = optional_json(depth.alpha);
  meta["zeta"] = optional_json(depth.zeta);
  meta["width"] = depth.width();
  meta["height"] = depth.height();
  meta["h"] = depth.values.spacing();
  meta["valid_pixels"] = depth.valid_count();
  std::ofstream side = open_out(sidecar_path(csv_path));
  side << meta.dump(2) << '\n';
}

DepthMap read_depth(const fs::path& csv_path, double spacing) {
  Field values = read_field_csv(csv_path, spacing);
  DepthMap depth(values.width(), values.height(), spacing);
  depth.valid = values.values().isFinite();
  depth.values = std::move(values);

  const fs::path side = sidecar_path(csv_path);
  if (fs::exists(side)) {
    std::ifstream in = open_in(side);
    try {
      const nlohmann::json meta = nlohmann::json::parse(in);
      depth.method = meta.value("method", "");
      depth.q = meta.value("q", 0);
      if (meta.contains("alpha") && meta["alpha"].is_number()) depth.alpha = meta["alpha"].get<double>();
      if (meta.contains("zeta") && meta["zeta"].is_number()) depth.zeta = meta["zeta"].get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("'" + side.string() + "': " + e.what());
    }
  }
  return depth;
}

std::string slide_name(std::size_t k, bool lossless) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "slide_%03zu.%s", k, lossless ? "csv" : "pgm");
  return buf;
}

void write_stack(const fs::path& dir, const FocalStack& stack, nlohmann::json metadata, bool lossless) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < stack.size(); ++k) {
    const fs::path path = dir / slide_name(k, lossless);
    if (lossless)
      write_field_csv(path, stack[k]);
    else
      write_pgm(path, stack[k]);
  }
  metadata["z_min"] = stack.z_min();
  metadata["z_max"] = stack.z_max();
  metadata["N"] = stack.size();
  metadata["h"] = stack.spacing();
  metadata["width"] = stack.width();
  metadata["height"] = stack.height();
  metadata["format"] = lossless ? "csv" : "pgm";
  std::ofstream out = open_out(dir / "stack.json");
  out << metadata.dump(2) << '\n';
}

FocalStack read_stack(const fs::path& dir) {
  const fs::path meta_path = dir / "stack.json";
  std::ifstream in = open_in(meta_path);
  nlohmann::json meta;
  double z_min = 0.0;
  double z_max = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  bool lossless = false;
  long width = -1;
  long height = -1;
  try {
    meta = nlohmann::json::parse(in);
    z_min = meta.at("z_min").get<double>();
    z_max = meta.at("z_max").get<double>();
    n = meta.at("N").get<std::size_t>();
    h = meta.at("h").get<double>();
    lossless = meta.value("format", "pgm") == "csv";
    width = meta.value("width", -1L);
    height = meta.value("height", -1L);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + meta_path.string() + "': " + e.what());
  }
  if (n < 3) throw FormatError("'" + meta_path.string() + "': N must be >= 3");

  std::vector<Field> slides;
  slides.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const fs::path path = dir / slide_name(k, lossless);
    if (!fs::exists(path)) throw FormatError("missing slide file '" + path.string() + "'");
    Field slide = lossless ? read_field_csv(path, h) : read_pgm(path, h);
    const bool size_mismatch = (width > 0 && slide.width() != width) || (height > 0 && slide.height() != height) ||
                               (!slides.empty() && !slide.same_shape(slides.front()));
    if (size_mismatch) throw FormatError("slide file '" + path.string() + "' does not match the stack dimensions");
    slides.push_back(std::move(slide));
  }
  try {
    return FocalStack(std::move(slides), z_min, z_max);
  } catch (const std::exception& e) {
    throw FormatError("'" + meta_path.string() + "': " + e.what());
  }
}

std::string kernel_csv(const Kernel<double>& kernel) {
  std::string out;
  char buf[64];
  for (int i = -kernel.zeta(); i <= kernel.zeta(); ++i) {
    for (int j = -kernel.zeta(); j <= kernel.zeta(); ++j) {
      if (j > -kernel.zeta()) out.push_back(',');
      std::snprintf(buf, sizeof(buf), "%.9g", kernel(i, j));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

nlohmann::json kernel_json(const Kernel<double>& kernel) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = -kernel.zeta(); i <= kernel.zeta(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = -kernel.zeta(); j <= kernel.zeta(); ++j) row.push_back(kernel(i, j));
    rows.push_back(std::move(row));
  }
  return {{"alpha", kernel.alpha()}, {"zeta", kernel.zeta()}, {"weights", std::move(rows)}};
}

}  // namespace fracfocus::io
