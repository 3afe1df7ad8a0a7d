#include "geodisc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "geodisc/error.hpp"
#include "geodisc/io.hpp"
#include "geodisc/kernels.hpp"
#include "geodisc/rng.hpp"

namespace geodisc {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json cell_to_json(const ScalingCell& c) {
  return json{{"N", c.N},           {"seed", c.seed},           {"value", c.value}, {"truncated", c.truncated},
              {"completed", c.completed}, {"tail_bound", c.tail_bound}, {"M", c.M}};
}

}  // namespace

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("fit needs equally many x and y values");
  if (x.size() < 2) throw DomainError("fit needs at least two points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit needs at least two distinct x values");
  FitResult f;
  f.points = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = ly[i] - f.intercept - f.slope * lx[i];
      ssr += e * e;
    }
    const double s2 = ssr / (n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

int scaled_degree(const DegreeSettings& s, std::size_t N, int d) {
  const double m = std::ceil(s.kappa * std::pow(static_cast<double>(N), 1.0 / d));
  return std::max(s.M_min, static_cast<int>(std::min(m, static_cast<double>(kDegreeCap))));
}

ScalingSummary summarize_scaling(const ScalingSpec& spec, const std::vector<ScalingCell>& cells) {
  ScalingSummary s;
  const int d = spec.space.dimension();
  for (std::size_t N : spec.N_grid) {
    std::vector<double> v;
    for (const auto& c : cells)
      if (c.N == N) v.push_back(c.value);
    if (v.empty()) continue;
    double mean = 0;
    for (double x : v) mean += x;
    mean /= v.size();
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sem = v.size() > 1 ? std::sqrt(var / (v.size() - 1) / v.size()) : 0.0;
    s.N.push_back(N);
    s.mean.push_back(mean);
    s.sem.push_back(sem);
    s.bound_constant.push_back(std::pow(static_cast<double>(N), 1.0 + 1.0 / d) * mean);
  }
  if (s.N.size() >= 2) {
    std::vector<double> xn(s.N.begin(), s.N.end());
    s.fit_full = fit_loglog(xn, s.mean);
    const std::size_t half = s.N.size() / 2;
    std::vector<double> xu(xn.begin() + half, xn.end()), yu(s.mean.begin() + half, s.mean.end());
    if (xu.size() >= 2) s.fit_upper = fit_loglog(xu, yu);
    s.bound_constant_trend = fit_loglog(xn, s.bound_constant);
  }
  if (!s.bound_constant.empty()) s.bound_constant_min = *std::min_element(s.bound_constant.begin(), s.bound_constant.end());
  return s;
}

ScalingStudy run_scaling(const ScalingSpec& spec, CellCache* cache, const ProgressFn& progress) {
  if (spec.N_grid.size() < 3) throw DomainError("scaling study needs at least three N values");
  for (std::size_t i = 1; i < spec.N_grid.size(); ++i)
    if (spec.N_grid[i] <= spec.N_grid[i - 1]) throw DomainError("N grid must be strictly increasing");
  if (spec.seeds < 1) throw DomainError("need at least one seed");
  if (spec.generator == GeneratorKind::TDesignFile || spec.generator == GeneratorKind::Matrix)
    throw DomainError("scaling studies need a generator that takes N; use the radius sweep for files");
  if (spec.generator == GeneratorKind::FibonacciSphere && !(spec.space.kind() == SpaceKind::sphere(2)))
    throw DomainError("Fibonacci points exist only on sphere2");
  std::vector<double> radii{spec.r};
  if (spec.two_radius) {
    if (!(spec.r > 0.0 && spec.r <= kPi / 2)) throw DomainError("two-radius mode needs 0 < r <= pi/2");
    radii.push_back(2 * spec.r);
  } else if (!(spec.r >= 0.0 && spec.r <= kPi)) {
    throw DomainError("radius must lie in [0, pi]");
  }

  ScalingStudy study;
  study.spec = spec;
  const int d = spec.space.dimension();
  for (std::size_t N : spec.N_grid) {
    for (int s = 0; s < spec.seeds; ++s) {
      ScalingCell c;
      c.N = N;
      c.seed_index = s;
      c.seed = spec.seed + static_cast<std::uint64_t>(s);
      const std::string key = "scaling N=" + std::to_string(N) + " seed=" + std::to_string(c.seed);
      if (cache) {
        if (auto hit = cache->load(key)) {
          c.value = hit->at("value").get<double>();
          c.truncated = hit->at("truncated").get<double>();
          c.completed = hit->at("completed").get<double>();
          c.tail_bound = hit->at("tail_bound").get<double>();
          c.M = hit->at("M").get<int>();
          c.cached = true;
          study.cells.push_back(c);
          continue;
        }
      }
      const WeightedPointSet ps = generate(spec.space, GeneratorSpec{spec.generator, N, c.seed, ""}, spec.threads);
      DiscrepancyOptions opt;
      opt.threads = spec.threads;
      if (spec.degree.policy == DegreePolicy::Scaled)
        opt.fixed_degree = scaled_degree(spec.degree, N, d);
      else
        opt.tol = spec.degree.tol;
      const DiscrepancyReport rep = l2_discrepancy_spectral_sum(ps, radii, opt);
      c.truncated = rep.value;
      c.completed = rep.completed;
      c.tail_bound = rep.tail_bound;
      c.M = rep.M_used;
      c.value = spec.degree.policy == DegreePolicy::Scaled ? rep.completed : rep.value;
      if (cache) cache->store(key, cell_to_json(c));
      if (progress) progress(key + " value=" + fmt(c.value) + " M=" + std::to_string(c.M));
      study.cells.push_back(c);
    }
  }
  study.summary = summarize_scaling(spec, study.cells);
  return study;
}

std::vector<double> bootstrap_slopes(const ScalingStudy& study, int reps, std::uint64_t seed) {
  std::vector<double> out;
  PhiloxStream rng(seed, stream_id(StreamTag::Bootstrap, 0));
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<ScalingCell> resampled;
    for (std::size_t N : study.spec.N_grid) {
      std::vector<const ScalingCell*> group;
      for (const auto& c : study.cells)
        if (c.N == N) group.push_back(&c);
      for (std::size_t i = 0; i < group.size(); ++i) {
        const auto pick = static_cast<std::size_t>(rng.uniform() * group.size());
        resampled.push_back(*group[std::min(pick, group.size() - 1)]);
      }
    }
    out.push_back(summarize_scaling(study.spec, resampled).fit_full.slope);
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) throw DomainError("grid needs at least one point");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  g.back() = hi;
  return g;
}

SweepResult run_radius_sweep(const std::vector<SweepSet>& sets, const std::vector<double>& r_grid,
                             const DegreeSettings& degree, double eps, int threads) {
  if (r_grid.empty()) throw DomainError("empty radius grid");
  for (double r : r_grid)
    if (!(r >= 0.0 && r <= kPi - eps)) throw DomainError("sweep radii must lie in [0, pi - eps]");
  SweepResult out;
  out.r_grid = r_grid;
  std::vector<double> scaled;
  for (const auto& set : sets) {
    const WeightedPointSet& ps = set.points;
    const SpaceParams& sp = ps.space().params();
    SweepRow row;
    row.label = set.label;
    row.N = ps.size();
    if (degree.policy == DegreePolicy::Scaled) {
      const int M = scaled_degree(degree, ps.size(), sp.d);
      row.M = M;
      const GramSpectrum g = gram_spectrum(ps, M, threads);
      const double sumsq = ps.sum_sq_weights();
      for (double r : r_grid) {
        const BallCoefficientTable t(sp, r, M);
        long double v = 0.0L;
        for (int m = 1; m <= M; ++m) v += g.S[m - 1] / g.dims[m - 1] * t.weight(m);
        row.values.push_back(static_cast<double>(v) + sumsq * std::max(0.0, t.variance() - t.partial(M)));
      }
    } else {
      DiscrepancyOptions opt;
      opt.tol = degree.tol;
      opt.threads = threads;
      for (double r : r_grid) {
        const DiscrepancyReport rep = l2_discrepancy_spectral(ps, r, opt);
        row.values.push_back(rep.value);
        row.M = std::max(row.M, rep.M_used);
      }
    }
    const auto it = std::max_element(row.values.begin(), row.values.end());
    row.sup = *it;
    row.argsup = r_grid[it - row.values.begin()];
    row.scaled_sup = std::pow(static_cast<double>(row.N), 1.0 + 1.0 / sp.d) * row.sup;
    scaled.push_back(row.scaled_sup);
    out.rows.push_back(std::move(row));
  }
  out.median_scaled_sup = median(scaled);
  out.max_scaled_sup = scaled.empty() ? 0.0 : *std::max_element(scaled.begin(), scaled.end());
  return out;
}

std::vector<BadRadiusRow> run_bad_radius_scan(const Space& space, const std::vector<double>& r_grid, int M_max,
                                              double delta, double threshold, int m0, int threads) {
  for (double r : r_grid)
    if (!(r > 0.0 && r < kPi)) throw DomainError("scan radii must lie in (0, pi)");
  std::vector<BadRadiusRow> rows(r_grid.size());
  const SpaceParams sp = space.params();
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(r_grid.size()); ++i) {
    rows[i].r = r_grid[i];
    rows[i].score = bad_radius_score(sp, r_grid[i], M_max, delta, m0);
    rows[i].flagged = rows[i].score < threshold;
  }
  return rows;
}

json to_json(const FitResult& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"slope_stderr", f.slope_stderr},
              {"intercept_stderr", f.intercept_stderr},
              {"points", f.points}};
}

json to_json(const ScalingSummary& s) {
  return json{{"N", s.N},
              {"mean", s.mean},
              {"sem", s.sem},
              {"bound_constant", s.bound_constant},
              {"bound_constant_min", s.bound_constant_min},
              {"bound_constant_trend", to_json(s.bound_constant_trend)},
              {"fit_full", to_json(s.fit_full)},
              {"fit_upper", to_json(s.fit_upper)},
              {"slope", s.fit_upper.slope},
              {"stderr", s.fit_upper.slope_stderr}};
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back(json{{"label", r.label},
                        {"N", r.N},
                        {"M", r.M},
                        {"values", r.values},
                        {"sup", r.sup},
                        {"argsup", r.argsup},
                        {"scaled_sup", r.scaled_sup}});
  return json{{"r_grid", s.r_grid},
              {"rows", rows},
              {"median_scaled_sup", s.median_scaled_sup},
              {"max_scaled_sup", s.max_scaled_sup},
              {"max_over_median", s.median_scaled_sup > 0 ? s.max_scaled_sup / s.median_scaled_sup : 0.0}};
}

std::string scaling_csv(const std::vector<ScalingCell>& cells) {
  std::ostringstream os;
  os << "N,seed,value,truncated,completed,tail_bound,M\n";
  for (const auto& c : cells)
    os << c.N << "," << c.seed << "," << fmt(c.value) << "," << fmt(c.truncated) << "," << fmt(c.completed) << ","
       << fmt(c.tail_bound) << "," << c.M << "\n";
  return os.str();
}

std::string scaling_long_csv(const ScalingStudy& study) {
  std::ostringstream os;
  os << "N,seed,quantity,value\n";
  for (const auto& c : study.cells) {
    os << c.N << "," << c.seed << ",value," << fmt(c.value) << "\n";
    os << c.N << "," << c.seed << ",truncated," << fmt(c.truncated) << "\n";
    os << c.N << "," << c.seed << ",tail_bound," << fmt(c.tail_bound) << "\n";
  }
  const auto& s = study.summary;
  for (std::size_t i = 0; i < s.N.size(); ++i) {
    os << s.N[i] << ",,mean," << fmt(s.mean[i]) << "\n";
    os << s.N[i] << ",,bound_constant," << fmt(s.bound_constant[i]) << "\n";
  }
  return os.str();
}

std::string sweep_long_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "label,N,r,value\n";
  for (const auto& row : s.rows)
    for (std::size_t i = 0; i < s.r_grid.size(); ++i)
      os << row.label << "," << row.N << "," << fmt(s.r_grid[i]) << "," << fmt(row.values[i]) << "\n";
  return os.str();
}

ScalingSpec scaling_spec_from_json(const json& j) {
  ScalingSpec s;
  try {
    if (j.contains("space")) s.space = Space(space_from_json(j["space"]));
    if (j.contains("generator")) s.generator = generator_from_string(j["generator"].get<std::string>());
    if (!j.contains("N")) throw DomainError("config needs an 'N' list");
    for (const auto& v : j["N"]) {
      const long long n = v.get<long long>();
      if (n < 1) throw DomainError("N values must be positive");
      s.N_grid.push_back(static_cast<std::size_t>(n));
    }
    if (j.contains("r")) s.r = j["r"].get<double>();
    if (j.contains("two_radius")) s.two_radius = j["two_radius"].get<bool>();
    if (j.contains("seeds")) s.seeds = j["seeds"].get<int>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) s.threads = j["threads"].get<int>();
    if (j.contains("degree_policy")) {
      const std::string p = j["degree_policy"].get<std::string>();
      if (p == "scaled")
        s.degree.policy = DegreePolicy::Scaled;
      else if (p == "adaptive")
        s.degree.policy = DegreePolicy::Adaptive;
      else
        throw DomainError("degree_policy must be 'scaled' or 'adaptive'");
    }
    if (j.contains("kappa")) s.degree.kappa = j["kappa"].get<double>();
    if (j.contains("M_min")) s.degree.M_min = j["M_min"].get<int>();
    if (j.contains("tol")) s.degree.tol = j["tol"].get<double>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("bad study config: ") + e.what());
  }
  return s;
}

json scaling_cell_config(const ScalingSpec& spec) {
  json j = to_json(spec);
  j.erase("N");
  j.erase("seeds");
  j.erase("threads");
  return j;
}

json to_json(const ScalingSpec& s) {
  return json{{"space", space_to_json(s.space)},
              {"generator", to_string(s.generator)},
              {"N", s.N_grid},
              {"r", s.r},
              {"two_radius", s.two_radius},
              {"seeds", s.seeds},
              {"seed", s.seed},
              {"threads", s.threads},
              {"degree_policy", s.degree.policy == DegreePolicy::Scaled ? "scaled" : "adaptive"},
              {"kappa", s.degree.kappa},
              {"M_min", s.degree.M_min},
              {"tol", s.degree.tol}};
}

}  // namespace geodisc
