#pragma once

#include <cstddef>
#include <vector>

#include "geodisc/spaces.hpp"

namespace geodisc {

struct EigenLevel {
  int m = 0;
  double lambda = 0.0;
  double dim = 1.0;
};

// lambda_m = m(m+a+b+1) and the eigenspace dimension
// d_m = (2m+a+b+1) (a+b+2)_{m-1} (a+1)_m / (m! (b+1)_m).
EigenLevel eigen_level(const SpaceParams& sp, int m);
double eigen_dim(const SpaceParams& sp, int m);
double log_eigen_dim(const SpaceParams& sp, int m);
// d_1..d_M in one pass (entry m-1 holds d_m).
std::vector<double> eigen_dims(const SpaceParams& sp, int M);
// d_m / d_{m-1} for m >= 2.
double eigen_dim_ratio(const SpaceParams& sp, int m);

// m + (a+b+1)/2
inline double shifted_degree(const SpaceParams& sp, int m) { return m + (sp.a + sp.b + 1) / 2; }

// Z^m(rho) = d_m P_m^{a,b}(cos rho) / P_m^{a,b}(1).
double zonal_eval(const SpaceParams& sp, int m, double rho);

// c_m(r): integral of Z^m over a ball of radius r, closed form.
double ball_coefficient(const SpaceParams& sp, int m, double r);

struct AsymptoticCoefficient {
  double main_term = 0.0;
  double error_scale = 0.0;
};

inline constexpr double kDefaultEndpointMargin = 0.3;

// Bessel main term of c_m(r) and the scale d_m m^{-5/2-a} of its error.
// Requires r <= pi - eps.
AsymptoticCoefficient ball_coefficient_asymptotic(const SpaceParams& sp, int m, double r,
                                                  double eps = kDefaultEndpointMargin);

// J_{a+1}(Mr)^2 + J_{a+1}(2Mr)^2 with M = m + (a+b+1)/2, for 0 < r < pi/2.
double two_radius_floor(const SpaceParams& sp, double r, int m);

struct PhaseFloor {
  double value = 0.0;
  double omega = 0.0;
};

// min over omega of cos^2(omega) + cos^2(2 omega + (a+1) pi/2 + pi/4) with
// a = (d-2)/2: the large-m limit of two_radius_floor after removing the
// Bessel envelope.
PhaseFloor two_radius_phase_floor(int d);

// min over m0 <= m <= M_max of m^{3/2+delta} |sin^{2a+2}(r/2) cos^{2b+2}(r/2) P_{m-1}^{a+1,b+1}(cos r)|.
double bad_radius_score(const SpaceParams& sp, double r, int M_max, double delta, int m0 = 2);

// c_m(r), d_m and the Parseval weights c_m^2/d_m for m = 1..M, with the
// exactly computable remainder V(1-V) - sum_{m<=M} c_m^2/d_m.
class BallCoefficientTable {
 public:
  BallCoefficientTable() = default;
  BallCoefficientTable(const SpaceParams& sp, double r, int M);

  const SpaceParams& params() const { return sp_; }
  double radius() const { return r_; }
  int max_degree() const { return static_cast<int>(coeffs_.size()); }
  double volume() const { return vol_; }
  // V(1-V), computed as V * (1 - V) with 1 - V from the complementary beta.
  double variance() const { return var_; }

  double coeff(int m) const { return coeffs_[m - 1]; }
  double dim(int m) const { return dims_[m - 1]; }
  double weight(int m) const { return weights_[m - 1]; }
  // sum_{k <= M} c_k^2 / d_k
  double partial(int M) const { return M == 0 ? 0.0 : partial_[M - 1]; }
  // Nonnegative upper bound on sum_{k > M} c_k^2 / d_k, including a
  // rounding allowance for the partial sum.
  double remainder(int M) const;
  // Smallest M in [1, max_degree()] with remainder(M) <= tol, or -1.
  int degree_for_tolerance(double tol) const;

  // Extends the table in place to degree M (no-op if already larger).
  void extend(int M);

  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& dims() const { return dims_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  SpaceParams sp_{};
  double r_ = 0.0;
  double vol_ = 0.0;
  double var_ = 0.0;
  // recurrence state for extension
  double x_ = 1.0;
  double logw_ = 0.0;
  bool zero_ = true;
  double rprev_ = 0.0, rcur_ = 1.0;
  long double acc_ = 0.0L;
  std::vector<double> coeffs_, dims_, weights_, partial_;
};

}  // namespace geodisc
