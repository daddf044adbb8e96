#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hops/sweep.hpp"

using namespace hops;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("linspace endpoints and degenerate ranges") {
  const auto grid = linspace(0.0, 1.0, 5);
  CHECK(grid.size() == 5);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  CHECK(grid[2] == Approx(0.5));
  CHECK(linspace(0.7, 0.7, 1) == std::vector<double>{0.7});
}

TEST_CASE("sweep rows mirror the closed-form modules") {
  SweepConfig config;
  config.ax_sq = 1.0;
  config.ph_mag = 1.0;
  config.kt_min = 0.25;
  config.kt_max = 0.25;
  config.kt_steps = 1;
  config.delta_min = 0.0;
  config.delta_max = 0.0;
  config.delta_steps = 1;

  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 1);
  const SweepRow& row = rows.front();
  CHECK(row.h0 == Approx(3.6292419044457311).epsilon(1e-14));
  CHECK(row.h2 == Approx(2.0).epsilon(1e-14));
  CHECK(row.h3 == Approx(-3.5256035809314041).epsilon(1e-14));
  CHECK(row.v2 == Approx(3.0).epsilon(1e-14));
  CHECK(row.sq == Approx(std::cosh(1.0)).epsilon(1e-14));
  CHECK(row.squeezed);
  CHECK(row.degree == Approx(degree_hidden(HopsInput{1.0, 1.0, 0.0}, 0.25)));
  CHECK_FALSE(row.t0.has_value());  // sin(delta) = 0

  config.delta_min = config.delta_max = kPi / 2;
  const auto rows_pos = run_sweep(config);
  REQUIRE(rows_pos.front().t0.has_value());
  CHECK(*rows_pos.front().t0 ==
        Approx(*critical_time(HopsInput{1.0, 1.0, kPi / 2}, 1.0)));
}

TEST_CASE("row ordering is (kt, delta) ascending and thread-count independent") {
  SweepConfig config;
  config.kt_min = 0.0;
  config.kt_max = 0.4;
  config.kt_steps = 5;
  config.delta_min = -2.0;
  config.delta_max = 2.0;
  config.delta_steps = 9;

  config.threads = 1;
  const auto serial = run_sweep(config);
  config.threads = 2;
  const auto parallel = run_sweep(config);
  REQUIRE(serial.size() == 45);
  REQUIRE(parallel.size() == 45);

  for (size_t i = 1; i < serial.size(); ++i) {
    const bool kt_up = serial[i].kt > serial[i - 1].kt;
    const bool same_kt_delta_up = serial[i].kt == serial[i - 1].kt &&
                                  serial[i].delta_h > serial[i - 1].delta_h;
    CHECK((kt_up || same_kt_delta_up));
  }

  std::ostringstream a, b;
  write_sweep_csv(serial, false, a);
  write_sweep_csv(parallel, false, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("csv output is deterministic and carries the documented header") {
  SweepConfig config;
  config.kt_steps = 3;
  config.kt_max = 0.5;
  config.delta_steps = 4;
  config.delta_min = -3.0;
  config.delta_max = 3.0;

  const auto rows = run_sweep(config);
  std::ostringstream first, second;
  write_sweep_csv(rows, false, first);
  write_sweep_csv(run_sweep(config), false, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().rfind("kt,delta_h,sq,h0,h1,h2,h3,v0,v1,v2,v3,degree,squeezed,t0\n", 0) == 0);

  const std::string meta = sweep_metadata_json(config);
  CHECK(meta.find("hops-sweep-csv") != std::string::npos);
  CHECK(meta.find("timestamp") == std::string::npos);
}

TEST_CASE("oracle columns agree with the closed forms at a modest cutoff") {
  SweepConfig config;
  config.ax_sq = 0.5;
  config.ph_mag = 1.0;
  config.kt_min = 0.0;
  config.kt_max = 0.2;
  config.kt_steps = 3;
  config.delta_min = -kPi / 2;
  config.delta_max = kPi / 2;
  config.delta_steps = 3;
  config.oracle = true;
  config.n_max = 20;

  const auto rows = run_sweep(config);
  CHECK(rows.size() == 9);
  for (const auto& row : rows) {
    REQUIRE(row.has_oracle);
    REQUIRE_FALSE(row.oracle_overflow);
    CHECK(row.oracle_h[0] == Approx(row.h0).epsilon(1e-6).scale(1.0));
    CHECK(row.oracle_h[3] == Approx(row.h3).epsilon(1e-6).scale(1.0));
    CHECK(row.oracle_v[1] == Approx(row.v1).epsilon(1e-6).scale(1.0));
    CHECK(row.oracle_v[2] == Approx(row.v2).epsilon(1e-6).scale(1.0));
    // Measured v3 sits exactly 2 above the verbatim closed form.
    CHECK(row.oracle_v[3] == Approx(row.v3 + 2.0).epsilon(1e-6).scale(1.0));
  }

  std::ostringstream csv;
  write_sweep_csv(rows, true, csv);
  CHECK(csv.str().find("oracle_h0") != std::string::npos);
  CHECK(csv.str().find("oracle_overflow") != std::string::npos);
}

TEST_CASE("oracle overflow flags rows instead of failing the sweep") {
  SweepConfig config;
  config.ax_sq = 1.0;
  config.ph_mag = 1.0;
  config.kt_min = 0.0;
  config.kt_max = 0.6;
  config.kt_steps = 4;
  config.delta_min = -kPi / 2;
  config.delta_max = -kPi / 2;
  config.delta_steps = 1;
  config.oracle = true;
  config.n_max = 16;

  const auto rows = run_sweep(config);
  CHECK(rows.size() == 4);
  CHECK_FALSE(rows.front().oracle_overflow);  // kt = 0 always representable
  CHECK(rows.back().oracle_overflow);         // kt = 0.6 blows past n_max 16
  CHECK(std::isnan(rows.back().oracle_h[0]));
}

TEST_CASE("invalid configurations are rejected") {
  SweepConfig bad;
  bad.kt_steps = 0;
  CHECK_THROWS_AS(run_sweep(bad), ConfigError);

  SweepConfig one_step;
  one_step.kt_steps = 1;  // proper range needs >= 2 points
  CHECK_THROWS_AS(run_sweep(one_step), ConfigError);

  SweepConfig inverted;
  inverted.kt_min = 1.0;
  inverted.kt_max = 0.0;
  CHECK_THROWS_AS(run_sweep(inverted), ConfigError);

  SweepConfig out_of_guard;
  out_of_guard.kt_max = 9.0;
  CHECK_THROWS_AS(run_sweep(out_of_guard), ConfigError);

  SweepConfig negative;
  negative.ax_sq = -1.0;
  CHECK_THROWS_AS(run_sweep(negative), ConfigError);

  SweepConfig oracle_too_far;
  oracle_too_far.oracle = true;
  oracle_too_far.kt_max = 1.5;  // beyond the evolver's |g t| <= 2
  CHECK_THROWS_AS(run_sweep(oracle_too_far), ConfigError);
}

TEST_CASE("fig1a preset: unit squeezing on the kt = 0 edge, squeezed half-plane") {
  const SweepConfig config = preset_fig1a();
  CHECK(config.ph_mag == 1.0);
  const auto rows = run_sweep(config);
  CHECK(rows.size() == 50 * 72);

  int squeezed_count = 0;
  for (const auto& row : rows) {
    if (row.kt == 0.0) {
      CHECK(row.sq == Approx(1.0).epsilon(1e-12));
    } else if (row.delta_h <= 0.0) {
      CHECK(row.sq > 1.0);  // the entire delta <= 0 half-plane is squeezed
    }
    squeezed_count += row.squeezed ? 1 : 0;
  }
  CHECK(squeezed_count > 0);

  // delta-dependence: at fixed kt > 0 the squeezing verdict varies.
  bool found_mixed_kt = false;
  for (size_t base = 0; base < rows.size(); base += 72) {
    if (rows[base].kt == 0.0) continue;
    int n_sq = 0;
    for (size_t j = base; j < base + 72; ++j) n_sq += rows[j].squeezed ? 1 : 0;
    if (n_sq > 0 && n_sq < 72) found_mixed_kt = true;
  }
  CHECK(found_mixed_kt);
}

TEST_CASE("fig1b preset carries the 25x intensity ratio") {
  const SweepConfig config = preset_fig1b();
  CHECK(config.ph_mag == 5.0);
  CHECK(config.ax_sq == 0.5);
  const auto rows = run_sweep(config);
  CHECK(rows.size() == 50 * 72);
  for (const auto& row : rows) {
    if (row.kt == 0.0) CHECK(row.sq == Approx(1.0).epsilon(1e-12));
  }
}
