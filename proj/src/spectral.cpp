#include "geodisc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "geodisc/error.hpp"
#include "geodisc/specfun.hpp"

namespace geodisc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Below this degree d_m is a running product of exact rational factors.
constexpr int kProductDims = 4096;

void check_m(int m, int lo) {
  if (m < lo) throw DomainError("degree must be >= " + std::to_string(lo));
}

void check_r(double r) {
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("radius must lie in [0, pi]");
}

double first_dim(const SpaceParams& sp) { return (sp.a + sp.b + 3) * (sp.a + 1) / (sp.b + 1); }

// dimensions are integers; undo the rounding of the ratio product while it is exactly representable
long double snap(long double d) {
  const long double k = std::nearbyint(d);
  return (k < 0x1p53L && std::abs(d - k) < 1e-6L * k) ? k : d;
}

}  // namespace

namespace {

long double dim_ratio(const SpaceParams& sp, int m) {
  const long double a = sp.a, b = sp.b;
  return (2 * m + a + b + 1) * (a + b + m) * (a + m) / ((2 * m + a + b - 1) * m * (b + m));
}

}  // namespace

double eigen_dim_ratio(const SpaceParams& sp, int m) { return static_cast<double>(dim_ratio(sp, m)); }

double log_eigen_dim(const SpaceParams& sp, int m) {
  check_m(m, 0);
  if (m == 0) return 0.0;
  const double a = sp.a, b = sp.b;
  double s = std::log(2 * m + a + b + 1) + std::lgamma(m + a + 1) - std::lgamma(a + 1) - std::lgamma(m + 1.0) -
             std::lgamma(m + b + 1) + std::lgamma(b + 1);
  // (a+b+2)_{m-1}; a+b+2 > 0 for every family
  s += std::lgamma(m + a + b + 1) - std::lgamma(a + b + 2);
  return s;
}

double eigen_dim(const SpaceParams& sp, int m) {
  check_m(m, 0);
  if (m == 0) return 1.0;
  if (m > kProductDims) return std::exp(log_eigen_dim(sp, m));
  long double d = first_dim(sp);
  for (int k = 2; k <= m; ++k) d = snap(d * dim_ratio(sp, k));
  return static_cast<double>(d);
}

std::vector<double> eigen_dims(const SpaceParams& sp, int M) {
  check_m(M, 0);
  std::vector<double> out(M);
  long double d = 1.0L;
  for (int m = 1; m <= M; ++m) {
    if (m == 1)
      d = first_dim(sp);
    else if (m <= kProductDims)
      d = snap(d * dim_ratio(sp, m));
    else
      d = std::exp(static_cast<long double>(log_eigen_dim(sp, m)));
    out[m - 1] = static_cast<double>(d);
  }
  return out;
}

EigenLevel eigen_level(const SpaceParams& sp, int m) {
  check_m(m, 0);
  return {m, m * (m + sp.a + sp.b + 1), eigen_dim(sp, m)};
}

double zonal_eval(const SpaceParams& sp, int m, double rho) {
  check_m(m, 0);
  check_r(rho);
  if (m == 0) return 1.0;
  NormalizedJacobi it(sp.a, sp.b, std::cos(rho));
  for (int k = 0; k < m; ++k) it.advance();
  return eigen_dim(sp, m) * it.value();
}

double ball_coefficient(const SpaceParams& sp, int m, double r) {
  check_m(m, 1);
  check_r(r);
  // c d_m / (m P_m^{a,b}(1)) * P_{m-1}^{a+1,b+1}(1) = c d_m / (a+1)
  const double s = std::sin(r / 2), c = std::sin((kPi - r) / 2);
  if (s == 0.0 || c == 0.0) return 0.0;
  NormalizedJacobi it(sp.a + 1, sp.b + 1, std::cos(r));
  for (int k = 0; k < m - 1; ++k) it.advance();
  const double logw = (2 * sp.a + 2) * std::log(s) + (2 * sp.b + 2) * std::log(c);
  return sp.c_ab * eigen_dim(sp, m) / (sp.a + 1) * std::exp(logw) * it.value();
}

AsymptoticCoefficient ball_coefficient_asymptotic(const SpaceParams& sp, int m, double r, double eps) {
  check_m(m, 1);
  if (!(eps > 0.0)) throw DomainError("endpoint margin must be positive");
  if (!(r >= 0.0 && r <= kPi - eps)) throw DomainError("radius must lie in [0, pi - eps]");
  AsymptoticCoefficient out;
  const double dm = eigen_dim(sp, m);
  out.error_scale = dm * std::pow(static_cast<double>(m), -2.5 - sp.a);
  if (r == 0.0) return out;
  const double M = shifted_degree(sp, m);
  const double s = std::sin(r / 2), c = std::cos(r / 2);
  const double logpre = std::lgamma(sp.a + 1) + (sp.a + 1) * std::log(s) + (sp.b + 1) * std::log(c) -
                        (sp.a + 1) * std::log(M);
  out.main_term = sp.c_ab * dm * std::exp(logpre) * std::sqrt(r / std::sin(r)) * bessel_j(sp.a + 1, M * r);
  return out;
}

double two_radius_floor(const SpaceParams& sp, double r, int m) {
  check_m(m, 1);
  if (!(r > 0.0 && r < kPi / 2)) throw DomainError("two-radius floor needs 0 < r < pi/2");
  const double M = shifted_degree(sp, m);
  const double j1 = bessel_j(sp.a + 1, M * r), j2 = bessel_j(sp.a + 1, 2 * M * r);
  return j1 * j1 + j2 * j2;
}

PhaseFloor two_radius_phase_floor(int d) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  const double a = (d - 2) / 2.0;
  const double phase = (a + 1) * kPi / 2 + kPi / 4;
  auto f = [phase](double w) {
    const double u = std::cos(w), v = std::cos(2 * w + phase);
    return u * u + v * v;
  };
  // period pi in omega
  constexpr int grid = 20000;
  int best = 0;
  double bestv = f(0.0);
  for (int k = 1; k < grid; ++k) {
    const double v = f(kPi * k / grid);
    if (v < bestv) {
      bestv = v;
      best = k;
    }
  }
  double lo = kPi * (best - 1) / grid, hi = kPi * (best + 1) / grid;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double w = 0.5 * (lo + hi);
  PhaseFloor out{std::min(bestv, f(w)), w};
  if (bestv < f(w)) out.omega = kPi * best / grid;
  out.omega = std::fmod(out.omega + kPi, kPi);
  return out;
}

double bad_radius_score(const SpaceParams& sp, double r, int M_max, double delta, int m0) {
  if (!(r > 0.0 && r < kPi)) throw DomainError("radius must lie in (0, pi)");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (m0 < 1 || M_max < m0) throw DomainError("need 1 <= m0 <= M_max");
  const double logw = (2 * sp.a + 2) * std::log(std::sin(r / 2)) + (2 * sp.b + 2) * std::log(std::cos(r / 2));
  NormalizedJacobi it(sp.a + 1, sp.b + 1, std::cos(r));
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= M_max; ++m) {
    if (m > 1) it.advance();  // it now holds degree m-1
    if (m < m0) continue;
    const double v = std::abs(it.value());
    const double score =
        v == 0.0 ? 0.0
                 : std::exp((1.5 + delta) * std::log(static_cast<double>(m)) + logw +
                            log_jacobi_at_one(sp.a + 1, m - 1)) *
                       v;
    best = std::min(best, score);
  }
  return best;
}

BallCoefficientTable::BallCoefficientTable(const SpaceParams& sp, double r, int M) : sp_(sp), r_(r) {
  check_r(r);
  check_m(M, 0);
  const double s = std::sin(r / 2);
  const double c = std::sin((kPi - r) / 2);
  vol_ = boost::math::ibeta(sp.a + 1, sp.b + 1, s * s);
  var_ = vol_ * boost::math::ibetac(sp.a + 1, sp.b + 1, s * s);
  zero_ = (s == 0.0 || c == 0.0);
  x_ = std::cos(r);
  if (!zero_) logw_ = (2 * sp.a + 2) * std::log(s) + (2 * sp.b + 2) * std::log(c);
  extend(M);
}

void BallCoefficientTable::extend(int M) {
  const int have = max_degree();
  if (M <= have) return;
  coeffs_.reserve(M);
  dims_.reserve(M);
  weights_.reserve(M);
  partial_.reserve(M);
  const double al = sp_.a + 1, be = sp_.b + 1;
  const double pre = zero_ ? 0.0 : sp_.c_ab / (sp_.a + 1) * std::exp(logw_);
  for (int m = have + 1; m <= M; ++m) {
    // rcur_ holds R_{m-1}^{a+1,b+1}(cos r)
    if (m == 2) {
      rprev_ = rcur_;
      rcur_ = normalized_jacobi_first(al, be, x_);
    } else if (m > 2) {
      const NormalizedStep st = normalized_jacobi_step(al, be, m - 2);
      const double next = (st.p * x_ + st.q) * rcur_ - st.g * rprev_;
      rprev_ = rcur_;
      rcur_ = next;
    }
    const double dm = m == 1 ? first_dim(sp_)
                      : m <= kProductDims ? static_cast<double>(snap(dims_.back() * dim_ratio(sp_, m)))
                                          : std::exp(log_eigen_dim(sp_, m));
    const double cm = pre * dm * rcur_;
    const double wm = pre * pre * dm * rcur_ * rcur_;
    coeffs_.push_back(cm);
    dims_.push_back(dm);
    weights_.push_back(wm);
    acc_ += wm;
    partial_.push_back(static_cast<double>(acc_));
  }
}

double BallCoefficientTable::remainder(int M) const {
  if (M < 0 || M > max_degree()) throw DomainError("degree outside the coefficient table");
  const double slack = (64.0 + 4.0 * M) * kEps * var_;
  return std::max(var_ - partial(M), 0.0) + slack;
}

int BallCoefficientTable::degree_for_tolerance(double tol) const {
  for (int M = 1; M <= max_degree(); ++M)
    if (remainder(M) <= tol) return M;
  return -1;
}

}  // namespace geodisc
