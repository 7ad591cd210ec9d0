// fracfocus: depth-from-focus command line driver.
//
//   fracfocus kernel   --alpha 1 --zeta 4 [--format csv|json]
//   fracfocus synth    --scene sphere --size 256 --slices 32 --out run/
//   fracfocus recover  --stack run/ --method nonlocal --q 1 --alpha 1.5 --zeta 4 --out run/depth.csv
//   fracfocus eval     --depth run/depth.csv --truth run/truth.csv --report run/report.json
//   fracfocus selftest

#include "fracfocus/eval.hpp"
#include "fracfocus/frac1d.hpp"
#include "fracfocus/io.hpp"
#include "fracfocus/kernel.hpp"
#include "fracfocus/synth.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fracfocus;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void log_stage(const std::string& line) { std::cerr << "[fracfocus] " << line << '\n'; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

json read_json_if_exists(const fs::path& path) {
  if (!fs::exists(path)) return json::object();
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw io::FormatError("'" + path.string() + "': " + e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_number(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json report_json(const ErrorReport& r) {
  return {{"rms_percent", r.rms_percent}, {"pixel_count", r.pixel_count}, {"method", r.method},
          {"q", r.q},                    {"alpha", optional_number(r.alpha)}, {"zeta", optional_number(r.zeta)}};
}

std::string format_alpha(double a) {
  std::ostringstream s;
  s << a;
  return s.str();
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
  double alpha = 1.0;
  int zeta = 4;
  std::string format = "csv";
};

int run_kernel(const KernelArgs& args) {
  require(args.alpha >= 0.0 && args.alpha <= 2.0, "--alpha must lie in [0, 2]");
  require(args.zeta >= 1, "--zeta must be >= 1");
  const Kernel<double> kernel = build_kernel(KernelOrder(args.alpha), args.zeta);
  if (args.format == "json")
    std::cout << io::kernel_json(kernel).dump(2) << '\n';
  else
    std::cout << io::kernel_csv(kernel);
  return 0;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
  std::string scene = "sphere";
  std::string texture = "value-noise";
  int size = 256;
  int width = 0;
  int height = 0;
  int slices = 32;
  double z_min = 0.0;
  double z_max = 1.0;
  double radius = 1.0;
  double plane_height = 0.5;
  double ramp_low = 0.0;
  double ramp_high = 1.0;
  double extent = 1.25;
  double wavelength = 0.0;
  double sigma0 = BlurSpec{}.sigma0;
  int max_radius = BlurSpec{}.max_radius;
  std::uint64_t seed = 7;
  bool lossless = false;
  std::vector<double> focal_planes;
  std::string out;
};

int run_synth(const SynthArgs& args) {
  const Eigen::Index width = args.width > 0 ? args.width : args.size;
  const Eigen::Index height = args.height > 0 ? args.height : args.size;
  require(width >= 2 && height >= 2, "--size/--width/--height must be >= 2");
  require(args.slices >= 3, "--slices must be >= 3");
  require(args.z_max > args.z_min, "--zmax must exceed --zmin");
  require(!args.out.empty(), "--out is required");

  SceneSpec scene;
  scene.kind = parse_scene_kind(args.scene);
  scene.texture = parse_texture_kind(args.texture);
  scene.radius = args.radius;
  scene.height = args.plane_height;
  scene.ramp_low = args.ramp_low;
  scene.ramp_high = args.ramp_high;
  scene.half_extent = args.extent;
  scene.seed = args.seed;
  const double h = grid_spacing(scene, width, height);
  // Without an explicit wavelength use the default, raised to stay resolvable
  // on coarse grids.
  scene.texture_wavelength = args.wavelength > 0.0 ? args.wavelength : std::max(SceneSpec{}.texture_wavelength, 2.04 * h);
  scene.validate();
  require(scene.texture_wavelength >= 2.0 * h, "--wavelength must be at least 2h = " + std::to_string(2.0 * h));
  if (scene.kind == SceneKind::plane)
    require(scene.height >= args.z_min && scene.height <= args.z_max, "--height must lie inside [zmin, zmax]");

  BlurSpec blur;
  blur.sigma0 = args.sigma0;
  blur.max_radius = args.max_radius;
  blur.validate();

  log_stage("rendering " + std::to_string(args.slices) + " slides of " + std::to_string(width) + "x" +
            std::to_string(height));
  const FocalStack stack = render_stack(scene, blur, width, height, args.slices, args.z_min, args.z_max, h);

  json meta;
  meta["scene"] = {{"kind", to_string(scene.kind)},
                   {"radius", scene.radius},
                   {"height", scene.height},
                   {"ramp_low", scene.ramp_low},
                   {"ramp_high", scene.ramp_high},
                   {"half_extent", scene.half_extent},
                   {"texture", to_string(scene.texture)},
                   {"texture_wavelength", scene.texture_wavelength}};
  meta["blur"] = {{"psf", "gaussian"}, {"sigma0", blur.sigma0}, {"max_radius", blur.max_radius}};
  meta["seed"] = scene.seed;
  const fs::path dir(args.out);
  io::write_stack(dir, stack, meta, args.lossless);

  const DepthMap truth = ground_truth(scene, width, height, h);
  io::write_depth(dir / "truth.csv", truth, {{"z_min", args.z_min}, {"z_max", args.z_max}});

  for (const double z : args.focal_planes) {
    char name[64];
    std::snprintf(name, sizeof(name), "focal_z%.3f.%s", z, args.lossless ? "csv" : "pgm");
    const Field slide = render_slide(scene, blur, width, height, z, h);
    if (args.lossless)
      io::write_field_csv(dir / name, slide);
    else
      io::write_pgm(dir / name, slide);
  }
  log_stage("wrote stack to " + dir.string());
  return 0;
}

// --------------------------------------------------------------- recover

struct RecoverArgs {
  std::string stack;
  std::string method = "nonlocal";
  int q = 1;
  double alpha = 1.5;
  int zeta = 4;
  std::string out;
  std::string preview;
  std::string volume_dir;
  std::string volume_format = "csv";
};

int run_recover(const RecoverArgs& args) {
  require(args.method == "local" || args.method == "nonlocal", "--method must be local or nonlocal");
  require(args.q >= 1, "--q must be >= 1");
  if (args.method == "nonlocal") {
    require(args.alpha >= 0.0 && args.alpha <= 2.0, "--alpha must lie in [0, 2]");
    require(args.zeta >= 1, "--zeta must be >= 1");
  }
  require(!args.out.empty(), "--out is required");

  log_stage("loading stack " + args.stack);
  const FocalStack stack = io::read_stack(args.stack);
  require(stack.width() > 2 * args.q && stack.height() > 2 * args.q, "slides are too small for --q");

  log_stage("computing " + args.method + " focus volume");
  FocusVolume volume = local_focus_volume(stack, args.q);
  if (args.method == "nonlocal") volume = nonlocal_focus_volume(volume, build_kernel(KernelOrder(args.alpha), args.zeta));

  const DepthMap depth = recover_depth(volume);
  io::write_depth(args.out, depth,
                  {{"z_min", stack.z_min()}, {"z_max", stack.z_max()}, {"N", stack.size()}, {"stack", args.stack}});
  if (!args.preview.empty()) io::write_pgm_preview(args.preview, depth.values);
  if (!args.volume_dir.empty()) {
    for (std::size_t k = 0; k < volume.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "layer_%03zu.%s", k, args.volume_format == "pgm" ? "pgm" : "csv");
      const fs::path path = fs::path(args.volume_dir) / name;
      if (args.volume_format == "pgm")
        io::write_pgm_preview(path, volume.layers[k]);
      else
        io::write_field_csv(path, volume.layers[k]);
    }
  }
  log_stage("wrote depth map " + args.out);
  return 0;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  std::string depth;
  std::string truth;
  std::string report;
  double z_range = 0.0;
  std::string table;
  std::string stack;
  int q = 1;
  std::vector<double> alphas = {2.0, 1.5, 1.0, 0.5, 0.0};
  std::vector<int> zetas = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> local_q;
  std::string profile;
  std::string axis = "y";
};

int run_eval(const EvalArgs& args) {
  require(!args.report.empty(), "--report is required");
  require(args.axis == "x" || args.axis == "y", "--axis must be x or y");
  if (!args.table.empty()) {
    require(!args.stack.empty(), "--table needs --stack");
    require(args.q >= 1, "--q must be >= 1");
    for (const double a : args.alphas) require(a >= 0.0 && a <= 2.0, "--alphas entries must lie in [0, 2]");
    for (const int z : args.zetas) require(z >= 1, "--zetas entries must be >= 1");
    for (const int q : args.local_q) require(q >= 1, "--local-q entries must be >= 1");
  }

  const json truth_meta = read_json_if_exists(io::sidecar_path(args.truth));
  const json depth_meta = read_json_if_exists(io::sidecar_path(args.depth));
  const double h = depth_meta.value("h", truth_meta.value("h", 1.0));
  const DepthMap recovered = io::read_depth(args.depth, h);
  const DepthMap truth = io::read_depth(args.truth, h);
  if (recovered.width() != truth.width() || recovered.height() != truth.height())
    throw UsageError("dimension mismatch: depth is " + std::to_string(recovered.width()) + "x" +
                     std::to_string(recovered.height()) + ", truth is " + std::to_string(truth.width()) + "x" +
                     std::to_string(truth.height()));

  double z_range = args.z_range;
  if (!(z_range > 0.0)) {
    const json& meta = depth_meta.contains("z_min") ? depth_meta : truth_meta;
    z_range = meta.contains("z_min") && meta.contains("z_max")
                  ? meta["z_max"].get<double>() - meta["z_min"].get<double>()
                  : 1.0;
  }

  const ErrorReport main = rms_error_percent(recovered, truth, z_range);
  json report = report_json(main);
  report["z_range"] = z_range;
  report["normalization"] = "100 * rms / z_range, z_range = z_max - z_min of the stack";
  report["mask"] = "pixels valid in both the recovered and the truth map";
  report["depth"] = args.depth;
  report["truth"] = args.truth;

  if (!args.table.empty()) {
    const FocalStack stack = io::read_stack(args.stack);
    std::vector<int> steps = args.zetas;
    for (const int q : args.local_q)
      if (std::find(steps.begin(), steps.end(), q) == steps.end()) steps.push_back(q);
    log_stage("computing comparison table");
    const ComparisonTable table = comparison_table(stack, truth, args.q, args.alphas, args.zetas, steps);
    const auto local_at = [&](int q) {
      const auto it = std::find(table.local_steps.begin(), table.local_steps.end(), q);
      return table.local[static_cast<std::size_t>(it - table.local_steps.begin())];
    };

    std::ostringstream csv;
    csv << "zeta";
    for (const double a : table.alphas) csv << ",alpha=" << format_alpha(a);
    csv << ",local_q=zeta";
    for (const int q : args.local_q) csv << ",local_q=" << q;
    csv << '\n';
    json rows = json::array();
    for (std::size_t r = 0; r < table.zetas.size(); ++r) {
      csv << table.zetas[r];
      json cells = json::array();
      for (const ErrorReport& cell : table.grid[r]) {
        csv << ',' << io::format_lossless(cell.rms_percent);
        cells.push_back(report_json(cell));
      }
      csv << ',' << io::format_lossless(local_at(table.zetas[r]).rms_percent);
      for (const int q : args.local_q) csv << ',' << io::format_lossless(local_at(q).rms_percent);
      csv << '\n';
      rows.push_back({{"zeta", table.zetas[r]}, {"cells", cells}});
    }
    write_text(args.table, csv.str());

    json local = json::array();
    for (const ErrorReport& r : table.local) local.push_back(report_json(r));
    report["table"] = {{"q", table.q},       {"alphas", table.alphas}, {"zetas", table.zetas},
                       {"grid", rows},       {"local", local},         {"z_range", table.z_range},
                       {"stack", args.stack}};
  }

  if (!args.profile.empty()) {
    const auto profile = axis_profile(recovered, truth, args.axis == "x" ? Axis::x : Axis::y);
    std::ostringstream csv;
    csv << args.axis << ",recovered,truth\n";
    for (const ProfilePoint& p : profile)
      csv << io::format_lossless(p.coordinate) << ',' << io::format_lossless(p.recovered) << ','
          << io::format_lossless(p.truth) << '\n';
    write_text(args.profile, csv.str());
    report["profile"] = {{"path", args.profile}, {"axis", args.axis}, {"points", profile.size()}};
  }

  write_text(args.report, report.dump(2) + "\n");
  log_stage("rms error " + std::to_string(main.rms_percent) + " % of z range over " +
            std::to_string(main.pixel_count) + " pixels");
  return 0;
}

// -------------------------------------------------------------- selftest

int run_selftest() {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok, double value) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << value << ")\n";
    failures += ok ? 0 : 1;
  };

  const Function1D gauss{[](double x) { return std::exp(-x * x); },
                         [](double x) { return -2.0 * x * std::exp(-x * x); }};
  const double integral = regularized_integral(gauss, 0.0, FracOrder1D(1.0));
  report("I^1 gaussian = sqrt(pi)/2", std::abs(integral - 0.5 * std::sqrt(std::numbers::pi)) < 1e-6, integral);
  const double d1 = regularized_derivative(gauss, 0.5, FracOrder1D(0.5), {}, DerivativeForm::derivative);
  const double d2 = regularized_derivative(gauss, 0.5, FracOrder1D(0.5), {}, DerivativeForm::difference);
  report("derivative form == difference form", std::abs(d1 - d2) < 1e-6, d1 - d2);
  const double riesz = riesz_second_derivative(gauss, 0.0, FracOrder1D(0.001));
  report("riesz alpha->0 gives f''(0) = -2", std::abs(riesz + 2.0) < 0.02, riesz);

  const Kernel<double> m1 = build_kernel(KernelOrder(1.0), 4);
  report("M(1)[0][1] = 0.294441", std::abs(m1(0, 1) - 0.294441) < 5e-6, m1(0, 1));
  const Kernel<double> m15 = build_kernel(KernelOrder(1.5), 4);
  report("M(3/2)[4][4] = 0.237922", std::abs(m15(4, 4) - 0.237922) < 5e-6, m15(4, 4));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth from focus with local and fractional nonlocal modified Laplacians"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores; FRACFOCUS_THREADS overrides)")
      ->check(CLI::NonNegativeNumber);

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel", "Print the nonlocalization kernel M(alpha)");
  kernel->add_option("--alpha", kernel_args.alpha, "Fractional order in [0, 2]");
  kernel->add_option("--zeta", kernel_args.zeta, "Cutoff radius in pixels");
  kernel->add_option("--format", kernel_args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Render a synthetic focal stack with ground truth");
  synth->add_option("--scene", synth_args.scene, "sphere, plane or ramp");
  synth->add_option("--texture", synth_args.texture, "value-noise or checker");
  synth->add_option("--size", synth_args.size, "Square image size in pixels");
  synth->add_option("--width", synth_args.width, "Image width (overrides --size)");
  synth->add_option("--height-px", synth_args.height, "Image height (overrides --size)");
  synth->add_option("--slices", synth_args.slices, "Number of slides N");
  synth->add_option("--zmin", synth_args.z_min, "Focal distance of the first slide");
  synth->add_option("--zmax", synth_args.z_max, "Focal distance of the last slide");
  synth->add_option("--radius", synth_args.radius, "Sphere radius");
  synth->add_option("--height", synth_args.plane_height, "Plane height");
  synth->add_option("--ramp-low", synth_args.ramp_low, "Ramp height at y = -extent");
  synth->add_option("--ramp-high", synth_args.ramp_high, "Ramp height at y = +extent");
  synth->add_option("--extent", synth_args.extent, "Half width L of the scene square [-L, L]^2");
  synth->add_option("--wavelength", synth_args.wavelength, "Texture wavelength in scene units");
  synth->add_option("--sigma0", synth_args.sigma0, "Blur growth in pixels per unit defocus");
  synth->add_option("--max-radius", synth_args.max_radius, "Largest PSF radius in pixels");
  synth->add_option("--seed", synth_args.seed, "Texture seed");
  synth->add_flag("--lossless", synth_args.lossless, "Write slides as CSV instead of 8-bit PGM");
  synth->add_option("--focal-planes", synth_args.focal_planes, "Extra single slides at these focal distances")
      ->delimiter(',');
  synth->add_option("--out", synth_args.out, "Output directory")->required();

  RecoverArgs recover_args;
  auto* recover = app.add_subcommand("recover", "Recover a depth map from a stack directory");
  recover->add_option("--stack", recover_args.stack, "Stack directory")->required();
  recover->add_option("--method", recover_args.method, "local or nonlocal");
  recover->add_option("--q", recover_args.q, "Modified Laplacian step");
  recover->add_option("--alpha", recover_args.alpha, "Fractional order in [0, 2] (nonlocal)");
  recover->add_option("--zeta", recover_args.zeta, "Kernel cutoff (nonlocal)");
  recover->add_option("--out", recover_args.out, "Depth CSV path")->required();
  recover->add_option("--preview", recover_args.preview, "Optional PGM preview of the depth map");
  recover->add_option("--volume-dir", recover_args.volume_dir, "Optional directory for focus-volume layers");
  recover->add_option("--volume-format", recover_args.volume_format, "csv (lossless) or pgm (rescaled)")
      ->check(CLI::IsMember({"csv", "pgm"}));

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Compare a depth map to ground truth");
  eval->add_option("--depth", eval_args.depth, "Recovered depth CSV")->required();
  eval->add_option("--truth", eval_args.truth, "Ground-truth depth CSV")->required();
  eval->add_option("--report", eval_args.report, "report.json path")->required();
  eval->add_option("--z-range", eval_args.z_range, "Normalization range (default: stack z_max - z_min)");
  eval->add_option("--table", eval_args.table, "Write the alpha x zeta comparison table CSV");
  eval->add_option("--stack", eval_args.stack, "Stack directory (table mode)");
  eval->add_option("--q", eval_args.q, "Modified Laplacian step for the table");
  eval->add_option("--alphas", eval_args.alphas, "Table columns")->delimiter(',');
  eval->add_option("--zetas", eval_args.zetas, "Table rows")->delimiter(',');
  eval->add_option("--local-q", eval_args.local_q, "Extra local steps q' reported in the table")->delimiter(',');
  eval->add_option("--profile", eval_args.profile, "Write the central axis profile CSV");
  eval->add_option("--axis", eval_args.axis, "Profile axis, x or y");

  auto* selftest = app.add_subcommand("selftest", "Run built-in numerical checks");

  CLI11_PARSE(app, argc, argv);
  set_thread_count(threads);

  try {
    if (kernel->parsed()) return run_kernel(kernel_args);
    if (synth->parsed()) return run_synth(synth_args);
    if (recover->parsed()) return run_recover(recover_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (selftest->parsed()) return run_selftest();
  } catch (const std::exception& e) {
    std::cerr << "fracfocus: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
