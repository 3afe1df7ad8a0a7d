#pragma once

// Exact eigenspace dimensions as rationals, for checking the floating-point
// values. Parameters are passed doubled (2a, 2b) so half-integers stay exact.

#include <boost/multiprecision/cpp_int.hpp>

namespace geodisc {

using Rational = boost::multiprecision::cpp_rational;

inline Rational exact_eigen_dim(int two_a, int two_b, int m) {
  if (m == 0) return Rational(1);
  const Rational a(two_a, 2), b(two_b, 2);
  Rational d = (a + b + 3) * (a + 1) / (b + 1);
  for (int k = 2; k <= m; ++k) d *= (2 * k + a + b + 1) / (2 * k + a + b - 1) * (a + b + k) / k * (a + k) / (b + k);
  return d;
}

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace geodisc
