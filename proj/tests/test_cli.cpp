#include "doctest.h"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracfocus_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Result run(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "fracfocus_cli_io";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(FRACFOCUS_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int raw = std::system(cmd.c_str());
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a)) files.push_back(e.path().filename());
  std::size_t count_b = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
  if (files.size() != count_b) return false;
  for (const auto& f : files)
    if (slurp(a / f) != slurp(b / f)) return false;
  return true;
}

}  // namespace

TEST_CASE("kernel subcommand") {
  const Result r = run("kernel --alpha 1.0 --zeta 4 --format csv");
  REQUIRE(r.status == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 9);
  REQUIRE(rows[4].size() == 9);
  CHECK(rows[4][4] == "1");
  CHECK(rows[4][5].rfind("0.29444090", 0) == 0);

  const Result delta = run("kernel --alpha 0 --zeta 2");
  REQUIRE(delta.status == 0);
  const auto d = parse_csv(delta.out);
  REQUIRE(d.size() == 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(d[i][j] == (i == 2 && j == 2 ? "1" : "0"));

  const Result json = run("kernel --alpha 1.5 --zeta 2 --format json");
  REQUIRE(json.status == 0);
  const auto j = nlohmann::json::parse(json.out);
  CHECK(j["alpha"] == 1.5);
  CHECK(j["weights"].size() == 5);

  const Result bad = run("kernel --alpha 3.0 --zeta 4");
  CHECK(bad.status != 0);
  CHECK(bad.err.find("alpha") != std::string::npos);
}

TEST_CASE("synth is deterministic and writes the stack layout") {
  const fs::path a = scratch("synth_a");
  const fs::path b = scratch("synth_b");
  const std::string args = "synth --scene sphere --size 40 --slices 6 --seed 7 --focal-planes 0.45,0.8 --out ";
  REQUIRE(run(args + a.string()).status == 0);
  REQUIRE(run("--threads 3 " + args + b.string()).status == 0);
  CHECK(same_tree(a, b));
  CHECK(fs::exists(a / "slide_000.pgm"));
  CHECK(fs::exists(a / "slide_005.pgm"));
  CHECK(fs::exists(a / "truth.csv"));
  CHECK(fs::exists(a / "focal_z0.450.pgm"));
  CHECK(fs::exists(a / "focal_z0.800.pgm"));
  const auto meta = nlohmann::json::parse(slurp(a / "stack.json"));
  CHECK(meta["N"] == 6);
  CHECK(meta["z_min"] == 0.0);
  CHECK(meta["z_max"] == 1.0);
  CHECK(meta["seed"] == 7);
  CHECK(meta["scene"]["kind"] == "sphere");
  CHECK(meta["blur"]["psf"] == "gaussian");
}

TEST_CASE("paper focal planes fall on the z grid when slices align") {
  const fs::path dir = scratch("synth_grid");
  REQUIRE(run("synth --scene sphere --size 24 --slices 21 --out " + dir.string()).status == 0);
  const auto meta = nlohmann::json::parse(slurp(dir / "stack.json"));
  const double dz = (meta["z_max"].get<double>() - meta["z_min"].get<double>()) / (meta["N"].get<int>() - 1);
  CHECK(0.45 / dz == doctest::Approx(9.0));
  CHECK(0.8 / dz == doctest::Approx(16.0));
}

TEST_CASE("plane truth") {
  const fs::path dir = scratch("synth_plane");
  REQUIRE(run("synth --scene plane --height 0.5 --size 16 --slices 5 --lossless --out " + dir.string()).status == 0);
  for (const auto& row : parse_csv(slurp(dir / "truth.csv")))
    for (const auto& cell : row) CHECK(cell == "0.5");
  CHECK(fs::exists(dir / "slide_004.csv"));
  CHECK(run("synth --scene plane --height 1.5 --size 16 --slices 5 --out " + dir.string()).status != 0);
}

TEST_CASE("recover and eval") {
  const fs::path dir = scratch("recover");
  REQUIRE(run("synth --scene plane --height 0.5 --size 48 --slices 9 --sigma0 8 --lossless --out " + dir.string())
              .status == 0);

  const std::string stack = " --stack " + dir.string();
  REQUIRE(run("recover --method local --q 1" + stack + " --out " + (dir / "local.csv").string()).status == 0);
  REQUIRE(run("recover --method nonlocal --q 1 --alpha 0 --zeta 3" + stack + " --out " + (dir / "nl0.csv").string())
              .status == 0);
  CHECK(slurp(dir / "local.csv") == slurp(dir / "nl0.csv"));
  const auto local_meta = nlohmann::json::parse(slurp(dir / "local.json"));
  CHECK(local_meta["method"] == "local");
  CHECK(local_meta["alpha"].is_null());

  REQUIRE(run("recover --method nonlocal --q 1 --alpha 1.5 --zeta 4" + stack + " --out " + (dir / "nl.csv").string() +
              " --preview " + (dir / "nl.pgm").string() + " --volume-dir " + (dir / "vol").string())
              .status == 0);
  CHECK(fs::exists(dir / "nl.pgm"));
  CHECK(fs::exists(dir / "vol" / "layer_008.csv"));

  REQUIRE(run("eval --depth " + (dir / "nl.csv").string() + " --truth " + (dir / "truth.csv").string() +
              " --report " + (dir / "report.json").string())
              .status == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["z_range"] == 1.0);
  CHECK(report["pixel_count"] == 46 * 46);
  CHECK(report["rms_percent"].get<double>() < 2.0);

  SUBCASE("depth equal to truth") {
    REQUIRE(run("eval --depth " + (dir / "truth.csv").string() + " --truth " + (dir / "truth.csv").string() +
                " --report " + (dir / "self.json").string())
                .status == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "self.json"))["rms_percent"] == 0.0);
  }

  SUBCASE("table and profile") {
    REQUIRE(run("eval --depth " + (dir / "nl.csv").string() + " --truth " + (dir / "truth.csv").string() +
                " --report " + (dir / "table.json").string() + " --table " + (dir / "table.csv").string() + stack +
                " --alphas 0,0.5,1,1.5,2 --zetas 1,2,3,4 --local-q 5 --profile " + (dir / "profile.csv").string())
                .status == 0);
    const auto rows = parse_csv(slurp(dir / "table.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].front() == "zeta");
    CHECK(rows[0][1] == "alpha=0");
    CHECK(rows[0][6] == "local_q=zeta");
    CHECK(rows[0][7] == "local_q=5");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      CHECK(rows[r].size() == 8);
      CHECK(rows[r][1] == rows[1][1]);  // alpha = 0 column is constant
    }
    const auto profile = parse_csv(slurp(dir / "profile.csv"));
    CHECK(profile.front() == std::vector<std::string>{"y", "recovered", "truth"});
    CHECK(profile.size() == 1 + 46);
    const auto table = nlohmann::json::parse(slurp(dir / "table.json"));
    CHECK(table["table"]["grid"].size() == 4);
    CHECK(table["table"]["local"].size() == 5);
  }

  SUBCASE("dimension mismatch") {
    const fs::path other = scratch("recover_small");
    REQUIRE(run("synth --scene plane --size 16 --slices 3 --out " + other.string()).status == 0);
    CHECK(run("eval --depth " + (dir / "nl.csv").string() + " --truth " + (other / "truth.csv").string() +
              " --report " + (dir / "bad.json").string())
              .status != 0);
  }

  SUBCASE("missing slide names the file") {
    const fs::path broken = scratch("recover_broken");
    fs::copy(dir, broken, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    fs::remove(broken / "slide_004.csv");
    const Result r = run("recover --method local --stack " + broken.string() + " --out " + (broken / "d.csv").string());
    CHECK(r.status != 0);
    CHECK(r.err.find("slide_004.csv") != std::string::npos);
  }

  SUBCASE("invalid parameters are rejected before work") {
    CHECK(run("recover --method nonlocal --alpha 2.5" + stack + " --out " + (dir / "x.csv").string()).status != 0);
    CHECK(run("recover --method median" + stack + " --out " + (dir / "x.csv").string()).status != 0);
    CHECK_FALSE(fs::exists(dir / "x.csv"));
  }
}

TEST_CASE("selftest") { CHECK(run("selftest").status == 0); }
