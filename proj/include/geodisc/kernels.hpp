#pragma once

// Hot loops behind the discrepancy module. Each has a straightforward serial
// reference and an OpenMP version. The parallel versions split work into a
// fixed set of blocks that depends only on the problem size and reduce the
// block results in block order, so their output does not depend on the
// thread count.

#include <cstdint>
#include <vector>

#include "geodisc/pointset.hpp"

namespace geodisc {

// GEODISC_THREADS if set and positive, else the OpenMP default.
int default_threads();
// requested > 0 is used as is; otherwise default_threads().
int resolve_threads(int requested);

// Raw Gram spectrum S_m = sum_{j,k} a_j a_k Z^m(rho_jk) for m = 1..M, before
// any clamping of rounding negatives.
std::vector<double> gram_spectrum_serial(const WeightedPointSet& ps, int M);
std::vector<double> gram_spectrum_parallel(const WeightedPointSet& ps, int M, int threads = 0);

// Number of pair blocks used by the parallel Gram and pair-sum kernels.
int pair_block_count(std::size_t n);

// K(rho) = sum_{m=1}^M w_m P_m^{a,b}(cos rho) / P_m^{a,b}(1), tabulated as a
// piecewise Chebyshev interpolant in rho on [0, pi].
class TruncatedBallKernel {
 public:
  static constexpr int kDegree = 16;

  TruncatedBallKernel(double a, double b, const std::vector<double>& w, int threads = 0);

  double operator()(double rho) const;
  // Direct O(M) evaluation, for testing the table.
  double exact(double rho) const;
  int panels() const { return panels_; }
  int max_degree() const { return static_cast<int>(w_.size()); }

  // Build cost in recurrence steps, used to choose between algorithms.
  static double build_cost(int M);

 private:
  double a_, b_;
  std::vector<double> w_;
  int panels_;
  double h_;
  std::vector<double> cheb_;  // panels_ x (kDegree+1)
};

// sum_{j<k} a_j a_k K(rho_jk)
double pair_kernel_sum_serial(const WeightedPointSet& ps, const TruncatedBallKernel& K);
double pair_kernel_sum_parallel(const WeightedPointSet& ps, const TruncatedBallKernel& K, int threads = 0);

struct MonteCarloSums {
  double sum2 = 0.0;  // sum of D^2
  double sum4 = 0.0;  // sum of D^4
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMonteCarloBlock = 4096;

// Draws `samples` uniform centers x and accumulates D_r(x)^2, D_r(x)^4 with
// D_r(x) = sum_j a_j [rho(x_j, x) < r] - volume. Block b uses the Philox
// stream (seed, MonteCarloBlock, b).
MonteCarloSums montecarlo_serial(const WeightedPointSet& ps, double r, double volume, std::uint64_t samples,
                                 std::uint64_t seed);
MonteCarloSums montecarlo_parallel(const WeightedPointSet& ps, double r, double volume, std::uint64_t samples,
                                   std::uint64_t seed, int threads = 0);

}  // namespace geodisc
