#include "geodisc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "geodisc/error.hpp"

namespace geodisc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxIter = 50;

// cos(r/2) computed as sin((pi - r)/2) so that r = pi gives exactly 0.
inline double half_cos(double r) { return std::sin((kPi - r) / 2); }

void check_x(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("Jacobi argument must lie in [-1, 1]");
}

void check_ab(double a, double b) {
  if (!(a > -1.0 && b > -1.0)) throw DomainError("Jacobi parameters must exceed -1");
}

}  // namespace

double jacobi_eval(const JacobiParams& p, double x) {
  check_x(x);
  check_ab(p.a, p.b);
  if (p.m < 0) throw DomainError("Jacobi degree must be nonnegative");
  const double al = p.a, be = p.b;
  if (p.m == 0) return 1.0;
  double prev = 1.0;
  double cur = (al + 1) + (al + be + 2) * (x - 1) / 2;
  for (int n = 1; n < p.m; ++n) {
    const double s = 2.0 * n + al + be;
    const double num = (s + 1) * ((s + 2) * s * x + al * al - be * be) * cur -
                       2 * (n + al) * (n + be) * (s + 2) * prev;
    const double next = num / (2.0 * (n + 1) * (n + al + be + 1) * s);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_jacobi_at_one(double a, int m) {
  return std::lgamma(m + a + 1) - std::lgamma(m + 1.0) - std::lgamma(a + 1);
}

double jacobi_at_one(const JacobiParams& p) {
  check_ab(p.a, p.b);
  if (p.m < 0) throw DomainError("Jacobi degree must be nonnegative");
  return std::exp(log_jacobi_at_one(p.a, p.m));
}

NormalizedStep normalized_jacobi_step(double al, double be, int n) {
  const double s = 2.0 * n + al + be;
  const double e = n + al + be + 1;
  const double f = n + al + 1;
  return {(s + 1) * (s + 2) / (2 * e * f), (s + 1) * (al * al - be * be) / (2 * e * s * f),
          n * (n + be) * (s + 2) / (e * s * f)};
}

double normalized_jacobi_first(double al, double be, double x) {
  return ((al + 1) + (al + be + 2) * (x - 1) / 2) / (al + 1);
}

NormalizedJacobi::NormalizedJacobi(double a, double b, double x) : a_(a), b_(b), x_(x) {
  check_ab(a, b);
  check_x(x);
}

void NormalizedJacobi::advance() {
  double next;
  if (m_ == 0) {
    next = normalized_jacobi_first(a_, b_, x_);
  } else {
    const NormalizedStep st = normalized_jacobi_step(a_, b_, m_);
    next = (st.p * x_ + st.q) * cur_ - st.g * prev_;
  }
  prev_ = cur_;
  cur_ = next;
  ++m_;
}

namespace {

double normalized_value(double al, double be, int n, double x) {
  NormalizedJacobi it(al, be, x);
  for (int k = 0; k < n; ++k) it.advance();
  return it.value();
}

}  // namespace

double weighted_jacobi(double a, double b, int m, double r) {
  if (m < 1) throw DomainError("weighted Jacobi form needs m >= 1");
  if (!(r >= 0.0 && r <= kPi)) throw DomainError("radius must lie in [0, pi]");
  const double s = std::sin(r / 2);
  const double c = half_cos(r);
  if (s == 0.0 || c == 0.0) return 0.0;
  const double rn = normalized_value(a + 1, b + 1, m - 1, std::cos(r));
  if (rn == 0.0) return 0.0;
  const double logmag = log_jacobi_at_one(a + 1, m - 1) + (2 * a + 2) * std::log(s) + (2 * b + 2) * std::log(c);
  return rn * std::exp(logmag);
}

// Bessel functions ---------------------------------------------------------

namespace {

long double bessel_series(double nu, double x) {
  // sum_k (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1))
  const long double h = static_cast<long double>(x) / 2;
  long double term = std::exp(nu * std::log(h) - std::lgamma(static_cast<long double>(nu) + 1));
  long double sum = term;
  const long double q = -h * h;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum) && k > h) break;
  }
  return sum;
}

long double bessel_asymptotic(double nu, double x) {
  const long double mu = 4.0L * nu * nu;
  const long double chi = x - nu * kPi / 2 - kPi / 4;
  long double P = 1.0L, Q = 0.0L;
  long double t = 1.0L;
  long double last = std::numeric_limits<long double>::infinity();
  bool peaked = false;
  for (int k = 1; k < 200; ++k) {
    const long double f = (mu - (2.0L * k - 1) * (2.0L * k - 1)) / (k * 8.0L * x);
    const long double nt = t * f;
    const long double mag = std::fabs(nt);
    if (mag == 0.0L) break;
    if (mag > last && peaked) break;  // terms growing again: truncate at the smallest
    if (mag < last) peaked = true;
    last = mag;
    t = nt;
    switch (k % 4) {
      case 1: Q += t; break;
      case 2: P -= t; break;
      case 3: Q -= t; break;
      case 0: P += t; break;
    }
    if (mag < 1e-20L) break;
  }
  return std::sqrt(2.0L / (kPi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(nu >= -0.5)) throw DomainError("Bessel order must be >= -1/2");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("Bessel argument must be finite and >= 0");
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  const double sw = std::max(12.0, 2 * nu);
  if (x <= sw) return static_cast<double>(bessel_series(nu, x));
  return static_cast<double>(bessel_asymptotic(nu, x));
}

double bessel_j_prime(double nu, double x) {
  if (x == 0.0) {
    if (nu == 1.0) return 0.5;
    if (nu == 0.0 || nu > 1.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return nu / x * bessel_j(nu, x) - bessel_j(nu + 1, x);
}

namespace {

// Safeguarded Newton inside [lo, hi] with f(lo), f(hi) of opposite sign.
template <class F, class DF>
std::pair<double, int> refine_bracketed(F f, DF df, double lo, double hi, double x0, double xtol) {
  double flo = f(lo);
  double x = x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 1; it <= kMaxIter; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return {x, it};
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double d = df(x);
    double nx = x - fx / d;
    if (!(nx > lo && nx < hi) || !std::isfinite(nx)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= xtol * std::max(1.0, std::abs(x)) || hi - lo <= xtol * std::max(1.0, std::abs(x)))
      return {nx, it};
    x = nx;
  }
  throw ConvergenceError("zero refinement did not converge in " + std::to_string(kMaxIter) + " iterations");
}

}  // namespace

double mcmahon_guess(double nu, int ell) { return (ell + nu / 2 - 0.25) * kPi; }

ZeroEstimate bessel_zero(double nu, int ell) {
  if (ell < 1) throw DomainError("zero index must be >= 1");
  if (!(nu >= -0.5)) throw DomainError("Bessel order must be >= -1/2");
  auto f = [nu](double x) { return bessel_j(nu, x); };
  auto df = [nu](double x) { return bessel_j_prime(nu, x); };
  const double g = mcmahon_guess(nu, ell);
  const double mu = 4 * nu * nu;
  const double est = (mu - 1) / (8 * g);
  ZeroEstimate z;
  z.initial = g;
  z.order_term = 1.0 / ell;
  double lo = 0, hi = 0;
  bool bracketed = false;
  if (std::abs(est) <= 0.6) {
    lo = std::max(g - 1.2, 1e-3);
    hi = g + 1.2;
    bracketed = (f(lo) < 0) != (f(hi) < 0);
  }
  if (!bracketed) {
    // Walk from below the first zero, counting sign changes.
    double x = nu > 0 ? nu : 0.1;
    double fx = f(x);
    int count = 0;
    const double step = 0.5;
    while (count < ell) {
      const double nx = x + step;
      const double fn = f(nx);
      if ((fn < 0) != (fx < 0) || fn == 0.0) {
        ++count;
        if (count == ell) {
          lo = x;
          hi = nx;
          break;
        }
      }
      x = nx;
      fx = fn;
      if (x > g + 10 * ell + 100) throw ConvergenceError("Bessel zero scan failed");
    }
  }
  const auto [loc, it] = refine_bracketed(f, df, lo, hi, std::clamp(g - est, lo, hi), 1e-15);
  z.location = loc;
  z.residual = std::abs(f(loc));
  z.iterations = it;
  return z;
}

// Jacobi zeros ---------------------------------------------------------------

namespace {

void check_fw(double a, double b, int m, int ell) {
  if (!(a >= -1.5 && a + b >= -3.0)) throw DomainError("zero asymptotics need a >= -3/2 and a+b >= -3");
  if (m < 2) throw DomainError("P_{m-1} has no zeros for m < 2");
  if (ell < 1 || ell > m - 1) throw DomainError("zero index out of range 1..m-1");
}

// FW estimate of the ell-th zero of P_n^{al,be}(cos theta).
double fw_raw(double al, double be, int n, int ell) {
  const double N = n + (al + be + 1) / 2;
  const double j = bessel_zero(al, ell).location;
  const double t = j / N;
  const double corr = (al * al - 0.25) * (1 - t / std::tan(t)) / (2 * t) - (al * al - be * be) / 4 * std::tan(t / 2);
  return t + corr / (N * N);
}

}  // namespace

double frenzen_wong_estimate(double a, double b, int m, int ell) {
  check_fw(a, b, m, ell);
  return fw_raw(a + 1, b + 1, m - 1, ell);
}

ZeroEstimate jacobi_zero(double a, double b, int m, int ell) {
  check_fw(a, b, m, ell);
  const int n = m - 1;
  const double al = a + 1, be = b + 1;
  const double M = m + (a + b + 1) / 2;
  double guess;
  if (2 * ell <= n + 1)
    guess = fw_raw(al, be, n, ell);
  else
    guess = kPi - fw_raw(be, al, n, n + 1 - ell);

  auto g = [&](double th) { return normalized_value(al, be, n, std::cos(th)); };
  auto dg = [&](double th) {
    // Rodrigues: d/dth [W R_n^{al,be}] = (a+1) W/(s c) R_m^{a,b}, W = s^{2a+2} c^{2b+2}
    const double s = std::sin(th / 2), c = half_cos(th);
    const double gv = g(th);
    const double rm = normalized_value(a, b, m, std::cos(th));
    return (a + 1) * rm / (s * c) - gv * ((a + 1) * c / s - (b + 1) * s / c);
  };

  ZeroEstimate z;
  z.initial = guess;
  z.order_term = 1.0 / (M * M);
  const double h = 0.3 * kPi / M;
  double lo = std::max(guess - h, 1e-300), hi = std::min(guess + h, kPi - 1e-15);
  bool ok = (g(lo) < 0) != (g(hi) < 0);
  if (ok) {
    // The bracket must hold exactly one zero; zeros are spaced by more than
    // pi/(M+1) in the interior, so reject brackets whose halves both change sign.
    const double mid = 0.5 * (lo + hi);
    ok = !(((g(lo) < 0) != (g(mid) < 0)) && ((g(mid) < 0) != (g(hi) < 0)));
  }
  if (!ok) {
    // Fallback: locate the ell-th sign change on a fine grid.
    const int steps = 16 * (n + 2);
    double x0 = 0.0, f0 = 1.0;
    int count = 0;
    for (int k = 1; k <= steps; ++k) {
      const double x1 = kPi * k / steps;
      const double f1 = (k == steps) ? g(kPi - 1e-12) : g(x1);
      if ((f1 < 0) != (f0 < 0)) {
        if (++count == ell) {
          lo = x0;
          hi = x1;
          ok = true;
          break;
        }
      }
      x0 = x1;
      f0 = f1;
    }
    if (!ok) throw ConvergenceError("could not bracket Jacobi zero " + std::to_string(ell));
    guess = 0.5 * (lo + hi);
  }
  const auto [loc, it] = refine_bracketed(g, dg, lo, hi, guess, 1e-15);
  z.location = loc;
  z.residual = std::abs(g(loc));
  z.iterations = it;
  return z;
}

}  // namespace geodisc
