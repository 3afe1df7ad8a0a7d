#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "geodisc/discrepancy.hpp"
#include "geodisc/pointsets.hpp"
#include "geodisc/spectral.hpp"
#include "json.hpp"

namespace geodisc {

class CellCache;

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  int points = 0;
};

// Least squares of log y on log x. Needs at least two points with x, y > 0;
// standard errors need three.
FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// How the truncation degree is chosen per cell. Scaled: M = max(M_min,
// ceil(kappa N^{1/d})) and the quantity is the completed estimate, whose
// error is far below the spread of the values. Adaptive: M from the
// tolerance and the quantity is the truncated value.
enum class DegreePolicy { Scaled, Adaptive };

struct DegreeSettings {
  DegreePolicy policy = DegreePolicy::Scaled;
  double kappa = 16.0;
  int M_min = 64;
  double tol = kDefaultTolerance;
};

int scaled_degree(const DegreeSettings& s, std::size_t N, int d);

struct ScalingSpec {
  Space space{SpaceKind::sphere(2)};
  GeneratorKind generator = GeneratorKind::UniformIID;
  std::vector<std::size_t> N_grid;
  double r = 1.0;
  bool two_radius = false;  // radii {r, 2r}
  int seeds = 1;
  std::uint64_t seed = 0;   // cell (N, s) uses seed + s
  DegreeSettings degree;
  int threads = 0;
};

struct ScalingCell {
  std::size_t N = 0;
  int seed_index = 0;
  std::uint64_t seed = 0;
  double value = 0.0;      // the quantity fitted (see DegreePolicy)
  double truncated = 0.0;
  double completed = 0.0;
  double tail_bound = 0.0;
  int M = 0;
  bool cached = false;
};

struct ScalingSummary {
  std::vector<std::size_t> N;
  std::vector<double> mean;
  std::vector<double> sem;            // standard error over seeds, 0 for one seed
  std::vector<double> bound_constant; // N^{1+1/d} * mean
  FitResult fit_full;
  FitResult fit_upper;                // upper half of the N grid
  FitResult bound_constant_trend;     // log-log fit of bound_constant vs N
  double bound_constant_min = 0.0;
};

struct ScalingStudy {
  ScalingSpec spec;
  std::vector<ScalingCell> cells;
  ScalingSummary summary;
};

using ProgressFn = std::function<void(const std::string&)>;

ScalingStudy run_scaling(const ScalingSpec& spec, CellCache* cache = nullptr, const ProgressFn& progress = {});
ScalingSummary summarize_scaling(const ScalingSpec& spec, const std::vector<ScalingCell>& cells);

// Refits the summary on `reps` bootstrap resamples of the seeds at each N and
// returns the resampled full-grid slopes.
std::vector<double> bootstrap_slopes(const ScalingStudy& study, int reps, std::uint64_t seed);

struct SweepSet {
  std::string label;
  WeightedPointSet points;
};

struct SweepRow {
  std::string label;
  std::size_t N = 0;
  int M = 0;
  std::vector<double> values;  // per radius
  double sup = 0.0;
  double argsup = 0.0;
  double scaled_sup = 0.0;     // N^{1+1/d} * sup
};

struct SweepResult {
  std::vector<double> r_grid;
  std::vector<SweepRow> rows;
  double median_scaled_sup = 0.0;
  double max_scaled_sup = 0.0;
};

// Evenly spaced grid of `count` radii on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);

// Requires every radius in [0, pi - eps].
SweepResult run_radius_sweep(const std::vector<SweepSet>& sets, const std::vector<double>& r_grid,
                             const DegreeSettings& degree = {}, double eps = kDefaultEndpointMargin,
                             int threads = 0);

struct BadRadiusRow {
  double r = 0.0;
  double score = 0.0;
  bool flagged = false;
};

std::vector<BadRadiusRow> run_bad_radius_scan(const Space& space, const std::vector<double>& r_grid, int M_max,
                                              double delta, double threshold, int m0 = 2, int threads = 0);

nlohmann::json to_json(const FitResult& f);
nlohmann::json to_json(const ScalingSummary& s);
nlohmann::json to_json(const SweepResult& s);
std::string scaling_csv(const std::vector<ScalingCell>& cells);
std::string scaling_long_csv(const ScalingStudy& study);
std::string sweep_long_csv(const SweepResult& s);

// Parses a study config object (see README for the keys).
ScalingSpec scaling_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScalingSpec& s);
// The part of the config that determines a single (N, seed) cell; cached
// cells stay valid when only the N grid or the seed count changes.
nlohmann::json scaling_cell_config(const ScalingSpec& s);

}  // namespace geodisc
