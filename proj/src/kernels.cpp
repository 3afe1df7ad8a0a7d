#include "geodisc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "geodisc/error.hpp"
#include "geodisc/pointsets.hpp"
#include "geodisc/rng.hpp"
#include "geodisc/specfun.hpp"
#include "geodisc/spectral.hpp"

namespace geodisc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kLanes = 8;
constexpr int kMaxPairBlocks = 64;

struct RowRange {
  std::size_t begin, end;
};

// Contiguous row ranges with roughly equal numbers of pairs (j, k > j).
std::vector<RowRange> pair_blocks(std::size_t n) {
  const int nb = pair_block_count(n);
  std::vector<RowRange> out;
  if (nb == 0) return out;
  const double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::size_t row = 0;
  double done = 0.0;
  for (int b = 0; b < nb; ++b) {
    const double target = total * (b + 1) / nb;
    const std::size_t start = row;
    while (row + 1 < n && (done < target || b == nb - 1)) {
      done += static_cast<double>(n - 1 - row);
      ++row;
    }
    out.push_back({start, row});
  }
  return out;
}

template <class Visit>
void for_pairs_in_rows(const WeightedPointSet& ps, RowRange rr, Visit&& visit) {
  const std::size_t n = ps.size();
  for (std::size_t j = rr.begin; j < rr.end; ++j)
    for (std::size_t k = j + 1; k < n; ++k) visit(j, k);
}

}  // namespace

int default_threads() {
  if (const char* env = std::getenv("GEODISC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return omp_get_max_threads();
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

int pair_block_count(std::size_t n) {
  if (n < 2) return 0;
  return static_cast<int>(std::min<std::size_t>(kMaxPairBlocks, n - 1));
}

std::vector<double> gram_spectrum_serial(const WeightedPointSet& ps, int M) {
  if (M < 1) throw DomainError("Gram spectrum needs M >= 1");
  const SpaceParams& sp = ps.space().params();
  const double al = sp.a, be = sp.b;
  const std::size_t n = ps.size();
  std::vector<double> acc(M, 0.0);
  std::vector<double> p1(M);
  for (int m = 1; m <= M; ++m) p1[m - 1] = jacobi_at_one({al, be, m});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double x = j == k ? 1.0 : ps.cos_distance(j, k);
      const double w = ps.weight(j) * ps.weight(k);
      double prev = 1.0;
      double cur = (al + 1) + (al + be + 2) * (x - 1) / 2;
      acc[0] += w * cur / p1[0];
      for (int nn = 1; nn < M; ++nn) {
        const double s = 2.0 * nn + al + be;
        const double next = ((s + 1) * ((s + 2) * s * x + al * al - be * be) * cur -
                             2 * (nn + al) * (nn + be) * (s + 2) * prev) /
                            (2.0 * (nn + 1) * (nn + al + be + 1) * s);
        prev = cur;
        cur = next;
        acc[nn] += w * cur / p1[nn];
      }
    }
  }
  const std::vector<double> dims = eigen_dims(sp, M);
  for (int m = 0; m < M; ++m) acc[m] *= dims[m];
  return acc;
}

std::vector<double> gram_spectrum_parallel(const WeightedPointSet& ps, int M, int threads) {
  if (M < 1) throw DomainError("Gram spectrum needs M >= 1");
  const SpaceParams& sp = ps.space().params();
  const double al = sp.a, be = sp.b;
  const auto blocks = pair_blocks(ps.size());
  const int nb = static_cast<int>(blocks.size());

  std::vector<NormalizedStep> steps(M);
  for (int m = 1; m < M; ++m) steps[m] = normalized_jacobi_step(al, be, m);
  std::vector<double> partial(static_cast<std::size_t>(nb) * M, 0.0);

#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (int b = 0; b < nb; ++b) {
    double* acc = partial.data() + static_cast<std::size_t>(b) * M;
    std::array<double, kLanes> x{}, w{}, prev{}, cur{};
    int fill = 0;
    auto flush = [&]() {
      for (int l = fill; l < kLanes; ++l) {
        x[l] = 1.0;
        w[l] = 0.0;
      }
      for (int l = 0; l < kLanes; ++l) {
        prev[l] = 1.0;
        cur[l] = normalized_jacobi_first(al, be, x[l]);
      }
      double s0 = 0.0;
      for (int l = 0; l < kLanes; ++l) s0 += w[l] * cur[l];
      acc[0] += s0;
      for (int m = 1; m < M; ++m) {
        const NormalizedStep st = steps[m];
        double s = 0.0;
        for (int l = 0; l < kLanes; ++l) {
          const double next = (st.p * x[l] + st.q) * cur[l] - st.g * prev[l];
          prev[l] = cur[l];
          cur[l] = next;
          s += w[l] * next;
        }
        acc[m] += s;
      }
      fill = 0;
    };
    for_pairs_in_rows(ps, blocks[b], [&](std::size_t j, std::size_t k) {
      x[fill] = ps.cos_distance(j, k);
      w[fill] = ps.weight(j) * ps.weight(k);
      if (++fill == kLanes) flush();
    });
    if (fill > 0) flush();
  }

  const double diag = ps.sum_sq_weights();
  const std::vector<double> dims = eigen_dims(sp, M);
  std::vector<double> out(M);
  for (int m = 0; m < M; ++m) {
    double g = 0.0;
    for (int b = 0; b < nb; ++b) g += partial[static_cast<std::size_t>(b) * M + m];
    out[m] = dims[m] * (diag + 2.0 * g);
  }
  return out;
}

// Kernel table ---------------------------------------------------------------

TruncatedBallKernel::TruncatedBallKernel(double a, double b, const std::vector<double>& w, int threads)
    : a_(a), b_(b), w_(w) {
  if (w_.empty()) throw DomainError("kernel needs at least one degree");
  const int M = static_cast<int>(w_.size());
  panels_ = std::max(32, M);
  h_ = kPi / panels_;
  constexpr int n1 = kDegree + 1;
  cheb_.assign(static_cast<std::size_t>(panels_) * n1, 0.0);
  std::array<double, n1> node{};
  for (int i = 0; i < n1; ++i) node[i] = std::cos(kPi * (i + 0.5) / n1);
  std::vector<NormalizedStep> steps(M);
  for (int m = 1; m < M; ++m) steps[m] = normalized_jacobi_step(a, b, m);

#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (int p = 0; p < panels_; ++p) {
    std::array<double, n1> f{};
    for (int i = 0; i < n1; ++i) {
      const double rho = h_ * (p + 0.5 * (node[i] + 1.0));
      const double x = std::cos(rho);
      double prev = 1.0, cur = normalized_jacobi_first(a, b, x);
      double s = w_[0] * cur;
      for (int m = 1; m < M; ++m) {
        const double next = (steps[m].p * x + steps[m].q) * cur - steps[m].g * prev;
        prev = cur;
        cur = next;
        s += w_[m] * cur;
      }
      f[i] = s;
    }
    double* c = cheb_.data() + static_cast<std::size_t>(p) * n1;
    for (int k = 0; k < n1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n1; ++i) s += f[i] * std::cos(kPi * k * (i + 0.5) / n1);
      c[k] = s * 2.0 / n1;
    }
    c[0] *= 0.5;
  }
}

double TruncatedBallKernel::build_cost(int M) { return (kDegree + 1.0) * std::max(32, M) * M; }

double TruncatedBallKernel::operator()(double rho) const {
  int p = static_cast<int>(rho / h_);
  p = std::clamp(p, 0, panels_ - 1);
  const double u = 2.0 * (rho - p * h_) / h_ - 1.0;
  const double* c = cheb_.data() + static_cast<std::size_t>(p) * (kDegree + 1);
  double b1 = 0.0, b2 = 0.0;
  for (int k = kDegree; k >= 1; --k) {
    const double t = 2.0 * u * b1 - b2 + c[k];
    b2 = b1;
    b1 = t;
  }
  return u * b1 - b2 + c[0];
}

double TruncatedBallKernel::exact(double rho) const {
  NormalizedJacobi it(a_, b_, std::cos(rho));
  double s = 0.0;
  for (double wm : w_) {
    it.advance();
    s += wm * it.value();
  }
  return s;
}

double pair_kernel_sum_serial(const WeightedPointSet& ps, const TruncatedBallKernel& K) {
  double s = 0.0;
  const std::size_t n = ps.size();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      s += ps.weight(j) * ps.weight(k) * K(std::acos(ps.cos_distance(j, k)));
  return s;
}

double pair_kernel_sum_parallel(const WeightedPointSet& ps, const TruncatedBallKernel& K, int threads) {
  const auto blocks = pair_blocks(ps.size());
  const int nb = static_cast<int>(blocks.size());
  std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_threads(threads))
  for (int b = 0; b < nb; ++b) {
    double s = 0.0;
    for_pairs_in_rows(ps, blocks[b], [&](std::size_t j, std::size_t k) {
      s += ps.weight(j) * ps.weight(k) * K(std::acos(ps.cos_distance(j, k)));
    });
    partial[b] = s;
  }
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

// Monte Carlo -----------------------------------------------------------------

namespace {

void check_mc(const WeightedPointSet& ps, double r, std::uint64_t samples) {
  if (ps.matrix_backed() || !ps.space().has_vector_model())
    throw UnsupportedError("Monte Carlo needs a uniform sampler; none exists for " + ps.space().name() +
                           (ps.matrix_backed() ? " with matrix-backed points" : ""));
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("radius must lie in [0, pi]");
  if (samples < 1000) throw DomainError("Monte Carlo needs at least 1000 samples");
}

MonteCarloSums mc_block(const WeightedPointSet& ps, double r, double volume, std::uint64_t seed, std::uint64_t b,
                        std::uint64_t count) {
  MonteCarloSums out;
  out.samples = count;
  if (r >= kPi) return out;  // D_pi vanishes identically
  const Space& space = ps.space();
  const double cr = std::cos(r);
  const std::size_t n = ps.size();
  std::vector<double> x(space.vector_length());
  PhiloxStream rng(seed, stream_id(StreamTag::MonteCarloBlock, b));
  for (std::uint64_t i = 0; i < count; ++i) {
    draw_uniform_point(space, rng, x);
    double inside = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (space.cos_distance(ps.point(j), x) > cr) inside += ps.weight(j);
    const double d = inside - volume;
    const double d2 = d * d;
    out.sum2 += d2;
    out.sum4 += d2 * d2;
  }
  return out;
}

}  // namespace

MonteCarloSums montecarlo_serial(const WeightedPointSet& ps, double r, double volume, std::uint64_t samples,
                                 std::uint64_t seed) {
  check_mc(ps, r, samples);
  MonteCarloSums tot;
  const std::uint64_t nb = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  for (std::uint64_t b = 0; b < nb; ++b) {
    const std::uint64_t cnt = std::min(kMonteCarloBlock, samples - b * kMonteCarloBlock);
    const MonteCarloSums s = mc_block(ps, r, volume, seed, b, cnt);
    tot.sum2 += s.sum2;
    tot.sum4 += s.sum4;
    tot.samples += s.samples;
  }
  return tot;
}

MonteCarloSums montecarlo_parallel(const WeightedPointSet& ps, double r, double volume, std::uint64_t samples,
                                   std::uint64_t seed, int threads) {
  check_mc(ps, r, samples);
  const std::uint64_t nb = (samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<MonteCarloSums> part(nb);
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_threads(threads))
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    const std::uint64_t cnt = std::min(kMonteCarloBlock, samples - ub * kMonteCarloBlock);
    part[ub] = mc_block(ps, r, volume, seed, ub, cnt);
  }
  MonteCarloSums tot;
  for (const auto& s : part) {
    tot.sum2 += s.sum2;
    tot.sum4 += s.sum4;
    tot.samples += s.samples;
  }
  return tot;
}

}  // namespace geodisc
