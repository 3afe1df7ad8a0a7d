#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geodisc/error.hpp"
#include "geodisc/pointset.hpp"

namespace geodisc {

inline constexpr double kDefaultTolerance = 1e-5;
inline constexpr int kDegreeCap = 100000;
inline constexpr double kNegativeClamp = -1e-9;

struct GramSpectrum {
  std::vector<double> S;  // S[m-1] = S_m, m = 1..M, rounding negatives clamped
  std::vector<double> dims;
  int clamped = 0;        // entries below -1e-9 set to 0
  double min_raw = 0.0;   // smallest raw entry before clamping
  int max_degree() const { return static_cast<int>(S.size()); }
};

// S_m = sum_{j,k} a_j a_k Z^m(rho(x_j, x_k)) for m = 1..M.
GramSpectrum gram_spectrum(const WeightedPointSet& ps, int M, int threads = 0);

enum class SpectralMethod { Auto, Gram, KernelTable };

struct DiscrepancyOptions {
  double tol = kDefaultTolerance;
  int degree_cap = kDegreeCap;
  int fixed_degree = 0;  // > 0 skips the adaptive choice of M
  bool per_m = false;    // keep the per-degree contributions (forces Gram)
  SpectralMethod method = SpectralMethod::Auto;
  int threads = 0;
};

struct DiscrepancyReport {
  double value = 0.0;       // truncated series, sum_{m<=M} S_m c_m^2 / d_m^2
  int M_used = 0;
  double tail_bound = 0.0;  // rigorous bound on truth - value
  // value plus the expected tail sum a_j^2 * (V(1-V) - partial); an
  // estimate, not a bound
  double completed = 0.0;
  std::vector<double> radii;
  std::vector<double> volumes;
  std::vector<double> per_m;
  bool converged = true;
  int clamped = 0;
  std::string method;
};

// Raised when the tolerance cannot be met below the degree cap. Carries the
// report computed at the cap.
class TruncationError : public DomainError {
 public:
  TruncationError(const std::string& what, DiscrepancyReport best) : DomainError(what), best_(std::move(best)) {}
  const DiscrepancyReport& best() const { return best_; }

 private:
  DiscrepancyReport best_;
};

// Integral over centers of |D_r|^2, by the spectral series.
DiscrepancyReport l2_discrepancy_spectral(const WeightedPointSet& ps, double r, const DiscrepancyOptions& opt = {});
// Sum of the L2 discrepancies over several radii, sharing one Gram spectrum
// or kernel table (the two-radius quantity uses {r, 2r}).
DiscrepancyReport l2_discrepancy_spectral_sum(const WeightedPointSet& ps, const std::vector<double>& radii,
                                              const DiscrepancyOptions& opt = {});

struct MonteCarloResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

MonteCarloResult l2_discrepancy_montecarlo(const WeightedPointSet& ps, double r, std::uint64_t samples,
                                           std::uint64_t seed, int threads = 0);

// sum_{m=1}^X S_m
double cassels_sum(const WeightedPointSet& ps, int X, int threads = 0);

struct StrengthReport {
  int strength = 0;
  std::vector<double> S;  // spectrum up to strength + 1 (or the cap)
  bool capped = false;    // every checked degree passed
};

// Largest X with S_m <= tol for all 1 <= m <= X, checking up to degree cap.
StrengthReport cubature_strength(const WeightedPointSet& ps, double tol = 1e-10, int cap = 1000, int threads = 0);

}  // namespace geodisc
