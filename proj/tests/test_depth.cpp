#include "fracfocus/depth.hpp"
#include "fracfocus/eval.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace fracfocus;

namespace {

FocusVolume column_volume(const std::vector<double>& column, Eigen::Index w, Eigen::Index h, double z_min, double z_max) {
  FocusVolume v;
  v.q = 1;
  v.z_min = z_min;
  v.z_max = z_max;
  for (const double c : column) {
    Field f(w, h, 1.0);
    f.values().setConstant(c);
    v.layers.push_back(f);
  }
  return v;
}

}  // namespace

TEST_CASE("parabolic peak") {
  CHECK(parabolic_peak(1.0, 3.0, 1.0).offset == 0.0);
  CHECK(parabolic_peak(1.0, 2.0, 2.0).offset == 0.5);
  CHECK(parabolic_peak(2.0, 2.0, 1.0).offset == -0.5);

  SUBCASE("exact vertex of a true parabola") {
    // rho(z) = 5 - (z - 0.37)^2 sampled at -1, 0, 1 around slice 0.
    const auto rho = [](double z) { return 5.0 - (z - 0.37) * (z - 0.37); };
    CHECK(parabolic_peak(rho(-1.0), rho(0.0), rho(1.0)).offset == doctest::Approx(0.37).epsilon(1e-15));
  }

  SUBCASE("flat and degenerate peaks") {
    const PeakOffset flat = parabolic_peak(2.0, 2.0, 2.0);
    CHECK(flat.degenerate);
    CHECK(flat.offset == 0.0);
    CHECK(parabolic_peak(0.0, 0.0, 0.0).degenerate);
  }

  SUBCASE("clamped to half a slice") {
    // Upward parabola: the formula extrapolates; the result stays in bracket.
    const PeakOffset p = parabolic_peak(1.0, 0.5, 3.0);
    CHECK(std::abs(p.offset) <= 0.5);
  }

  SUBCASE("float inputs") { CHECK(parabolic_peak(1.0f, 3.0f, 1.0f).offset == 0.0); }
}

TEST_CASE("recover depth") {
  SUBCASE("symmetric middle peak") {
    const DepthMap d = recover_depth(column_volume({0.1, 0.9, 0.1}, 5, 4, 0.0, 1.0));
    CHECK(d.valid.all());
    CHECK((d.values.values() == 0.5).all());
  }

  SUBCASE("edge peak falls back to the slice position") {
    const DepthMap d = recover_depth(column_volume({2.0, 1.0, 1.0, 1.0}, 3, 3, 0.2, 0.8));
    CHECK(d.valid.all());
    CHECK((d.values.values() == 0.2).all());
  }

  SUBCASE("ties resolve to the lowest slice") {
    const DepthMap d = recover_depth(column_volume({1.0, 3.0, 3.0, 0.0}, 2, 2, 0.0, 3.0));
    // Peak at slice 1: offset -1/2 (3 - 1) / (3 - 6 + 1) = +0.5.
    CHECK((d.values.values() == 1.5).all());
  }

  SUBCASE("all-zero columns are invalid") {
    const DepthMap d = recover_depth(column_volume({0.0, 0.0, 0.0}, 4, 4, 0.0, 1.0));
    CHECK(d.valid_count() == 0);
  }

  SUBCASE("needs three layers") {
    FocusVolume v = column_volume({1.0, 2.0, 1.0}, 2, 2, 0.0, 1.0);
    v.layers.pop_back();
    CHECK_THROWS_AS(recover_depth(v), std::domain_error);
  }

  SUBCASE("metadata") {
    FocusVolume v = column_volume({0.1, 0.9, 0.1}, 2, 2, 0.0, 1.0);
    v.alpha = 1.5;
    v.zeta = 4;
    v.q = 2;
    const DepthMap d = recover_depth(v);
    CHECK(d.method == "nonlocal");
    CHECK(d.alpha == 1.5);
    CHECK(d.zeta == 4);
    CHECK(d.q == 2);
  }
}

TEST_CASE("depth properties on random volumes") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FocusVolume v;
  v.q = 1;
  v.z_min = -0.5;
  v.z_max = 2.0;
  for (int k = 0; k < 7; ++k) {
    Field f(9, 8, 1.0);
    for (Eigen::Index j = 0; j < 8; ++j)
      for (Eigen::Index i = 0; i < 9; ++i) f(i, j) = u(rng);
    v.layers.push_back(f);
  }
  const DepthMap base = recover_depth(v);

  SUBCASE("clamped range") {
    const double dz = v.delta_z();
    CHECK((base.values.values() >= v.z_min - dz / 2).all());
    CHECK((base.values.values() <= v.z_max + dz / 2).all());
  }

  SUBCASE("invariant under positive rescaling") {
    for (const double c : {0.25, 8.0}) {
      FocusVolume scaled = v;
      for (Field& f : scaled.layers) f.values() *= c;
      CHECK(identical(recover_depth(scaled), base));
    }
  }

  SUBCASE("deterministic across thread counts") {
    set_thread_count(3);
    const DepthMap again = recover_depth(v);
    set_thread_count(0);
    CHECK(identical(again, base));
  }
}
