#include "geodisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geodisc/kernels.hpp"
#include "geodisc/spectral.hpp"

namespace geodisc {

namespace {

constexpr double kPi = std::numbers::pi;

void check_radius(double r) {
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("radius must lie in [0, pi]");
}

// Coefficient tables for all radii, long enough for the requested tolerance.
struct DegreeChoice {
  std::vector<BallCoefficientTable> tables;
  int M = 0;
  bool converged = true;
};

double total_remainder(const std::vector<BallCoefficientTable>& t, int M) {
  double s = 0.0;
  for (const auto& tab : t) s += tab.remainder(M);
  return s;
}

DegreeChoice choose_degree(const SpaceParams& sp, const std::vector<double>& radii, const DiscrepancyOptions& opt) {
  DegreeChoice out;
  if (opt.fixed_degree > 0) {
    for (double r : radii) out.tables.emplace_back(sp, r, opt.fixed_degree);
    out.M = opt.fixed_degree;
    return out;
  }
  if (!(opt.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (opt.degree_cap < 1) throw DomainError("degree cap must be >= 1");
  int M = std::min(64, opt.degree_cap);
  for (double r : radii) out.tables.emplace_back(sp, r, M);
  for (;;) {
    // the remainder is nonincreasing in M up to the rounding allowance, so
    // scan upward from the previous table size
    for (int k = 1; k <= M; ++k) {
      if (total_remainder(out.tables, k) <= opt.tol) {
        out.M = k;
        return out;
      }
    }
    if (M >= opt.degree_cap) break;
    M = std::min(2 * M, opt.degree_cap);
    for (auto& t : out.tables) t.extend(M);
  }
  out.M = M;
  out.converged = false;
  return out;
}

}  // namespace

GramSpectrum gram_spectrum(const WeightedPointSet& ps, int M, int threads) {
  GramSpectrum g;
  g.S = gram_spectrum_parallel(ps, M, threads);
  g.dims = eigen_dims(ps.space().params(), M);
  g.min_raw = *std::min_element(g.S.begin(), g.S.end());
  for (double& s : g.S) {
    if (s < 0.0) {
      if (s < kNegativeClamp) ++g.clamped;
      s = 0.0;
    }
  }
  return g;
}

DiscrepancyReport l2_discrepancy_spectral_sum(const WeightedPointSet& ps, const std::vector<double>& radii,
                                              const DiscrepancyOptions& opt) {
  if (radii.empty()) throw DomainError("need at least one radius");
  for (double r : radii) check_radius(r);
  const SpaceParams& sp = ps.space().params();
  const DegreeChoice dc = choose_degree(sp, radii, opt);
  const int M = dc.M;

  DiscrepancyReport rep;
  rep.M_used = M;
  rep.radii = radii;
  rep.converged = dc.converged;
  for (const auto& t : dc.tables) rep.volumes.push_back(t.volume());
  rep.tail_bound = total_remainder(dc.tables, M);

  std::vector<double> w(M, 0.0);
  for (const auto& t : dc.tables)
    for (int m = 1; m <= M; ++m) w[m - 1] += t.weight(m);

  const double n = static_cast<double>(ps.size());
  SpectralMethod method = opt.method;
  if (method == SpectralMethod::Auto) {
    const double gram_cost = 0.5 * n * n * M;
    const double table_cost = TruncatedBallKernel::build_cost(M) + 20.0 * n * n;
    method = (opt.per_m || gram_cost <= table_cost) ? SpectralMethod::Gram : SpectralMethod::KernelTable;
  }
  if (opt.per_m && method != SpectralMethod::Gram) throw DomainError("per-degree output needs the Gram method");

  const double sumsq = ps.sum_sq_weights();
  if (method == SpectralMethod::Gram) {
    rep.method = "gram";
    const GramSpectrum g = gram_spectrum(ps, M, opt.threads);
    rep.clamped = g.clamped;
    long double v = 0.0L;
    if (opt.per_m) rep.per_m.resize(M);
    for (int m = 1; m <= M; ++m) {
      const double term = g.S[m - 1] / g.dims[m - 1] * w[m - 1];
      v += term;
      if (opt.per_m) rep.per_m[m - 1] = term;
    }
    rep.value = static_cast<double>(v);
  } else {
    rep.method = "kernel";
    const TruncatedBallKernel K(sp.a, sp.b, w, opt.threads);
    long double partial = 0.0L;
    for (double x : w) partial += x;
    const double pairs = pair_kernel_sum_parallel(ps, K, opt.threads);
    rep.value = std::max(0.0, static_cast<double>(sumsq * partial + 2.0L * pairs));
  }
  double expected_tail = 0.0;
  for (const auto& t : dc.tables) expected_tail += std::max(0.0, t.variance() - t.partial(M));
  rep.completed = rep.value + sumsq * expected_tail;

  if (!dc.converged) {
    throw TruncationError("tolerance " + std::to_string(opt.tol) + " not reached below degree cap " +
                              std::to_string(opt.degree_cap) + "; best tail bound " + std::to_string(rep.tail_bound),
                          rep);
  }
  return rep;
}

DiscrepancyReport l2_discrepancy_spectral(const WeightedPointSet& ps, double r, const DiscrepancyOptions& opt) {
  return l2_discrepancy_spectral_sum(ps, {r}, opt);
}

MonteCarloResult l2_discrepancy_montecarlo(const WeightedPointSet& ps, double r, std::uint64_t samples,
                                           std::uint64_t seed, int threads) {
  check_radius(r);
  const double vol = ps.space().ball_volume(r);
  const MonteCarloSums s = montecarlo_parallel(ps, r, vol, samples, seed, threads);
  MonteCarloResult out;
  const double n = static_cast<double>(s.samples);
  out.samples = s.samples;
  out.estimate = s.sum2 / n;
  const double var = std::max(0.0, s.sum4 / n - out.estimate * out.estimate) * n / (n - 1);
  out.std_error = std::sqrt(var / n);
  return out;
}

double cassels_sum(const WeightedPointSet& ps, int X, int threads) {
  if (X < 1) throw DomainError("Cassels sum needs X >= 1");
  const GramSpectrum g = gram_spectrum(ps, X, threads);
  long double s = 0.0L;
  for (double v : g.S) s += v;
  return static_cast<double>(s);
}

StrengthReport cubature_strength(const WeightedPointSet& ps, double tol, int cap, int threads) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (cap < 1) throw DomainError("degree cap must be >= 1");
  StrengthReport out;
  int M = std::min(16, cap);
  for (;;) {
    const GramSpectrum g = gram_spectrum(ps, M, threads);
    int k = 0;
    while (k < M && g.S[k] <= tol) ++k;
    if (k < M) {
      out.strength = k;
      out.S.assign(g.S.begin(), g.S.begin() + k + 1);
      return out;
    }
    if (M >= cap) {
      out.strength = M;
      out.S = g.S;
      out.capped = true;
      return out;
    }
    M = std::min(4 * M, cap);
  }
}

}  // namespace geodisc
