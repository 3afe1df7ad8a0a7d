#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "geodisc/error.hpp"
#include "geodisc/experiments.hpp"
#include "geodisc/io.hpp"
#include "geodisc/specfun.hpp"
#include "test_util.hpp"

using namespace geodisc;
using std::numbers::pi;
namespace fs = std::filesystem;

TEST_CASE("log-log fit") {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  const auto f = fit_loglog(x, y);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(test::close(f.slope_stderr, 0.0, 0, 1e-12));
  CHECK(f.points == 5);
  // noisy data: standard error from the residuals
  const std::vector<double> yn{1.0, 0.6, 0.2, 0.13, 0.05};
  const auto g = fit_loglog(x, yn);
  CHECK(g.slope_stderr > 0.0);
  CHECK(g.slope < 0.0);
  CHECK_THROWS_AS(fit_loglog({1}, {1}), DomainError);
  CHECK_THROWS_AS(fit_loglog({1, 2}, {1, -1}), DomainError);
  CHECK_THROWS_AS(fit_loglog({2, 2}, {1, 3}), DomainError);
}

TEST_CASE("scaled degree") {
  DegreeSettings s;
  CHECK(scaled_degree(s, 1, 2) == 64);
  CHECK(scaled_degree(s, 100, 2) == 160);
  CHECK(scaled_degree(s, 10000, 4) == 160);
  s.kappa = 1e9;
  CHECK(scaled_degree(s, 10, 2) == kDegreeCap);
}

TEST_CASE("i.i.d. scaling has slope -1") {
  ScalingSpec spec;
  spec.space = Space(SpaceKind::complex(2));
  spec.N_grid = {16, 32, 64, 128, 256};
  spec.r = 1.0;
  spec.seeds = 12;
  spec.seed = 500;
  std::vector<std::string> log;
  const auto st = run_scaling(spec, nullptr, [&](const std::string& s) { log.push_back(s); });
  CHECK(st.cells.size() == 60);
  CHECK(log.size() == 60);
  CHECK(st.summary.N.size() == 5);
  CHECK(st.summary.fit_full.slope == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(st.summary.fit_full.slope_stderr < 0.1);
  // expected value V(1-V)/N
  const double V = spec.space.ball_volume(1.0);
  for (std::size_t i = 0; i < st.summary.N.size(); ++i)
    CHECK(std::abs(st.summary.mean[i] - V * (1 - V) / st.summary.N[i]) < 5 * st.summary.sem[i]);
  for (const auto& c : st.cells) {
    CHECK(c.value == c.completed);
    CHECK(c.truncated <= c.completed);
    CHECK(c.M == scaled_degree(spec.degree, c.N, 4));
  }
  const auto boot = bootstrap_slopes(st, 50, 1);
  CHECK(boot.size() == 50);
  double mean = 0;
  for (double b : boot) mean += b / boot.size();
  CHECK(mean == doctest::Approx(st.summary.fit_full.slope).epsilon(0.05));
  CHECK(bootstrap_slopes(st, 50, 1) == boot);

  const auto csv = scaling_csv(st.cells);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
  CHECK(csv.rfind("N,seed,value,truncated,completed,tail_bound,M\n", 0) == 0);
  const auto j = to_json(st.summary);
  CHECK(j["slope"].get<double>() == st.summary.fit_upper.slope);
  CHECK(j["fit_full"]["points"] == 5);
}

TEST_CASE("scaling validation") {
  ScalingSpec spec;
  spec.N_grid = {10, 20};
  CHECK_THROWS_AS(run_scaling(spec), DomainError);
  spec.N_grid = {10, 20, 20};
  CHECK_THROWS_AS(run_scaling(spec), DomainError);
  spec.N_grid = {10, 20, 40};
  spec.generator = GeneratorKind::FibonacciSphere;
  spec.space = Space(SpaceKind::real(2));
  CHECK_THROWS_AS(run_scaling(spec), DomainError);
  spec.space = Space(SpaceKind::sphere(2));
  spec.two_radius = true;
  spec.r = 2.0;
  CHECK_THROWS_AS(run_scaling(spec), DomainError);
  spec.generator = GeneratorKind::TDesignFile;
  spec.r = 1.0;
  CHECK_THROWS_AS(run_scaling(spec), DomainError);
}

TEST_CASE("scaling with the cell cache") {
  const auto dir = (fs::temp_directory_path() / "geodisc_test_experiments").string();
  fs::remove_all(dir);
  ScalingSpec spec;
  spec.N_grid = {8, 16, 32};
  spec.seeds = 2;
  spec.generator = GeneratorKind::FibonacciSphere;
  spec.two_radius = true;
  spec.r = 0.5;
  const std::string digest = json_digest(scaling_cell_config(spec));
  std::vector<std::string> warnings;
  CellCache c1(dir, digest, true, [&](const std::string& w) { warnings.push_back(w); });
  const auto a = run_scaling(spec, &c1);
  CHECK(c1.misses() == 6);
  CellCache c2(dir, digest, true);
  const auto b = run_scaling(spec, &c2);
  CHECK(c2.hits() == 6);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(b.cells[i].cached);
    CHECK(b.cells[i].value == a.cells[i].value);
  }
  // cells stay valid when the N grid grows; a new radius invalidates them
  auto grown = spec;
  grown.N_grid.push_back(64);
  CHECK(json_digest(scaling_cell_config(grown)) == digest);
  auto moved = spec;
  moved.r = 0.6;
  CHECK(json_digest(scaling_cell_config(moved)) != digest);
  CHECK(warnings.empty());
}

TEST_CASE("config round trip") {
  ScalingSpec s;
  s.space = Space(SpaceKind::quaternion(2));
  s.N_grid = {10, 20, 40};
  s.r = 0.7;
  s.seeds = 3;
  s.degree.policy = DegreePolicy::Adaptive;
  s.degree.tol = 1e-6;
  const auto back = scaling_spec_from_json(to_json(s));
  CHECK(back.space == s.space);
  CHECK(back.N_grid == s.N_grid);
  CHECK(back.r == 0.7);
  CHECK(back.degree.policy == DegreePolicy::Adaptive);
  CHECK(back.degree.tol == 1e-6);
  CHECK_THROWS_AS(scaling_spec_from_json(nlohmann::json{{"r", 1.0}}), DomainError);
  CHECK_THROWS_AS(scaling_spec_from_json(nlohmann::json{{"N", {10, 20}}, {"degree_policy", "fast"}}), DomainError);
  CHECK_THROWS_AS(scaling_spec_from_json(nlohmann::json{{"N", {10, -2}}}), DomainError);
}

TEST_CASE("radius sweep") {
  const Space s2(SpaceKind::sphere(2));
  std::vector<SweepSet> sets{{"fib100", fibonacci_sphere(100)}, {"iid100", sample_uniform(s2, 100, 4)}};
  const auto grid = linear_grid(0.1, pi - 0.3, 25);
  CHECK(grid.size() == 25);
  CHECK(grid.back() == pi - 0.3);
  const auto res = run_radius_sweep(sets, grid);
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.values.size() == 25);
    CHECK(row.sup == *std::max_element(row.values.begin(), row.values.end()));
    CHECK(row.scaled_sup == doctest::Approx(std::pow(100.0, 1.5) * row.sup));
  }
  // spot check one radius against the adaptive path
  DiscrepancyOptions opt;
  const auto rep = l2_discrepancy_spectral(sets[0].points, grid[7], opt);
  CHECK(res.rows[0].values[7] == doctest::Approx(rep.completed).epsilon(1e-3));
  CHECK(res.rows[0].sup < res.rows[1].sup);
  CHECK(res.max_scaled_sup >= res.median_scaled_sup);
  CHECK(to_json(res)["max_over_median"].get<double>() >= 1.0);
  const auto csv = sweep_long_csv(res);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
  CHECK_THROWS_AS(run_radius_sweep(sets, {3.0}), DomainError);
}

TEST_CASE("bad radius scan") {
  const Space cp2(SpaceKind::complex(2));
  const double bad = jacobi_zero(1, 0, 15, 4).location;
  std::vector<double> grid = linear_grid(0.2, 2.8, 27);
  grid.push_back(bad);
  const auto rows = run_bad_radius_scan(cp2, grid, 30, 0.1, 1e-6);
  REQUIRE(rows.size() == grid.size());
  CHECK(rows.back().flagged);
  int flagged = 0;
  for (const auto& r : rows) flagged += r.flagged;
  CHECK(flagged < static_cast<int>(grid.size()) / 2);
  CHECK_THROWS_AS(run_bad_radius_scan(cp2, {0.0}, 30, 0.1, 1e-6), DomainError);
}
