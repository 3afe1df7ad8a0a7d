#pragma once

// Jacobi polynomials, the weighted Jacobi form used for ball coefficients,
// Bessel functions of the first kind and the zero finders for both.

namespace geodisc {

struct JacobiParams {
  double a = 0.0;
  double b = 0.0;
  int m = 0;
};

struct ZeroEstimate {
  double location = 0.0;
  double residual = 0.0;  // |f(location)| at the refined zero
  double initial = 0.0;   // asymptotic estimate before refinement
  double order_term = 0.0;
  int iterations = 0;
};

// P_m^{a,b}(x) by the three-term recurrence in m.
double jacobi_eval(const JacobiParams& p, double x);

// P_m^{a,b}(1) = Gamma(m+a+1) / (Gamma(m+1) Gamma(a+1)), via log-gamma.
double jacobi_at_one(const JacobiParams& p);
double log_jacobi_at_one(double a, int m);

// Normalized R_m = P_m^{a,b}(x) / P_m^{a,b}(1), stepped in m. Starts at
// R_0 = 1 and stays bounded by 1 for a >= b >= -1/2, so it never overflows.
class NormalizedJacobi {
 public:
  NormalizedJacobi(double a, double b, double x);
  int degree() const { return m_; }
  double value() const { return cur_; }
  double previous() const { return prev_; }
  void advance();

 private:
  double a_, b_, x_;
  int m_ = 0;
  double prev_ = 0.0;
  double cur_ = 1.0;
};

// Coefficients of R_{n+1} = (p x + q) R_n - g R_{n-1} for n >= 1.
struct NormalizedStep {
  double p, q, g;
};
NormalizedStep normalized_jacobi_step(double a, double b, int n);
double normalized_jacobi_first(double a, double b, double x);

// sin^{2a+2}(r/2) cos^{2b+2}(r/2) P_{m-1}^{a+1,b+1}(cos r), with (a, b) the
// parameters of the space (the shift by one is applied here).
double weighted_jacobi(double a, double b, int m, double r);

// J_nu(x) for nu >= -1/2, x >= 0.
double bessel_j(double nu, double x);
// d/dx J_nu(x).
double bessel_j_prime(double nu, double x);

// The ell-th positive zero of J_nu. Throws ConvergenceError if refinement fails.
ZeroEstimate bessel_zero(double nu, int ell);
double mcmahon_guess(double nu, int ell);

// The ell-th zero (in theta = arccos x, increasing) of P_{m-1}^{a+1,b+1}(cos theta).
// `initial` holds the asymptotic estimate, `location` the refined zero.
ZeroEstimate jacobi_zero(double a, double b, int m, int ell);
double frenzen_wong_estimate(double a, double b, int m, int ell);

}  // namespace geodisc
