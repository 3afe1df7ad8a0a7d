#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "geodisc/error.hpp"
#include "geodisc/experiments.hpp"
#include "geodisc/specfun.hpp"
#include "geodisc/spectral.hpp"
#include "geodisc/spectral_exact.hpp"
#include "test_util.hpp"

using namespace geodisc;
using std::numbers::pi;

TEST_CASE("eigenspace dimensions") {
  auto dims = [](SpaceKind k, int M) { return eigen_dims(space_params(k), M); };
  CHECK(dims(SpaceKind::sphere(2), 3) == std::vector<double>{3, 5, 7});
  CHECK(dims(SpaceKind::real(2), 3) == std::vector<double>{5, 9, 13});
  CHECK(dims(SpaceKind::complex(2), 3) == std::vector<double>{8, 27, 64});
  CHECK(dims(SpaceKind::quaternion(2), 2) == std::vector<double>{14, 90});
  CHECK(dims(SpaceKind::octonion(), 2) == std::vector<double>{26, 324});
  CHECK(dims(SpaceKind::sphere(3), 3) == std::vector<double>{4, 9, 16});
  CHECK(eigen_dim(space_params(SpaceKind::sphere(2)), 0) == 1.0);
  CHECK(eigen_level(space_params(SpaceKind::complex(2)), 2).lambda == 2 * (2 + 1 + 0 + 1));
  CHECK_THROWS_AS(eigen_dim(space_params(SpaceKind::sphere(2)), -1), DomainError);

  for (auto k : test::all_families()) {
    const auto sp = space_params(k);
    const int two_a = static_cast<int>(std::lround(2 * sp.a)), two_b = static_cast<int>(std::lround(2 * sp.b));
    const auto d = eigen_dims(sp, 300);
    for (int m = 1; m <= 300; ++m) {
      const Rational q = exact_eigen_dim(two_a, two_b, m);
      REQUIRE(is_integer(q));
      const double exact = static_cast<double>(q);
      CHECK(d[m - 1] == doctest::Approx(exact).epsilon(1e-13));
      CHECK(eigen_dim(sp, m) == doctest::Approx(exact).epsilon(1e-13));
      CHECK(std::exp(log_eigen_dim(sp, m)) == doctest::Approx(exact).epsilon(1e-10));
    }
    // the product and log-gamma forms agree across the switch
    CHECK(eigen_dim(sp, 4096) == doctest::Approx(std::exp(log_eigen_dim(sp, 4096))).epsilon(1e-10));
    CHECK(eigen_dims(sp, 4100)[4096] == doctest::Approx(eigen_dim(sp, 4097)).epsilon(1e-10));
  }
}

TEST_CASE("zonal functions") {
  const auto s2 = space_params(SpaceKind::sphere(2));
  CHECK(zonal_eval(s2, 1, 0.0) == doctest::Approx(3.0));
  CHECK(zonal_eval(s2, 1, pi / 3) == doctest::Approx(1.5));
  CHECK(zonal_eval(s2, 2, pi / 2) == doctest::Approx(-2.5));
  CHECK(zonal_eval(s2, 0, 1.0) == 1.0);
  for (auto k : test::five_families()) {
    const auto sp = space_params(k);
    for (int m : {1, 5, 40}) CHECK(zonal_eval(sp, m, 0.0) == doctest::Approx(eigen_dim(sp, m)).epsilon(1e-13));
    for (int m : {1, 4, 9})
      CHECK(zonal_eval(sp, m, 0.8) ==
            doctest::Approx(eigen_dim(sp, m) * jacobi_eval({sp.a, sp.b, m}, std::cos(0.8)) /
                            jacobi_at_one({sp.a, sp.b, m}))
                .epsilon(1e-11));
  }
  CHECK_THROWS_AS(zonal_eval(s2, 1, 4.0), DomainError);
}

TEST_CASE("ball coefficient against quadrature of the zonal function") {
  CHECK(ball_coefficient(space_params(SpaceKind::sphere(2)), 1, pi) == 0.0);
  CHECK(ball_coefficient(space_params(SpaceKind::sphere(2)), 3, 0.0) == 0.0);
  // S^2, m = 1: 3 * integral_0^r cos t sin t / 2 dt = 3 sin^2(r) / 4
  CHECK(ball_coefficient(space_params(SpaceKind::sphere(2)), 1, 1.0) ==
        doctest::Approx(0.75 * std::sin(1.0) * std::sin(1.0)).epsilon(1e-14));
  for (auto k : test::all_families()) {
    const Space space(k);
    const auto& sp = space.params();
    for (double r : {0.2, 1.0, 1.9, 2.8}) {
      for (int m : {1, 2, 3, 7, 15, 30, 50}) {
        auto f = [&](double t) {
          NormalizedJacobi it(sp.a, sp.b, std::cos(t));
          for (int i = 0; i < m; ++i) it.advance();
          return it.value() * space.radial_density(t);
        };
        const double q =
            eigen_dim(sp, m) * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, r, 8, 1e-13);
        const double c = ball_coefficient(sp, m, r);
        CAPTURE(space.name());
        CAPTURE(m);
        CAPTURE(r);
        CHECK(std::abs(c - q) <= 1e-9 * std::max(1.0, std::sqrt(eigen_dim(sp, m))));
      }
    }
  }
}

TEST_CASE("coefficient table") {
  for (auto k : test::five_families()) {
    const Space space(k);
    const auto& sp = space.params();
    for (double r : {0.4, 1.0, 2.5}) {
      BallCoefficientTable t(sp, r, 200);
      CHECK(t.max_degree() == 200);
      CHECK(t.volume() == doctest::Approx(space.ball_volume(r)).epsilon(1e-15));
      CHECK(t.variance() == doctest::Approx(t.volume() * (1 - t.volume())).epsilon(1e-13));
      for (int m : {1, 2, 50, 200}) {
        CHECK(test::close(t.coeff(m), ball_coefficient(sp, m, r), 1e-10, 1e-13));
        CHECK(t.dim(m) == doctest::Approx(eigen_dim(sp, m)).epsilon(1e-13));
        CHECK(test::close(t.weight(m), t.coeff(m) * t.coeff(m) / t.dim(m), 1e-12, 1e-300));
      }
      // Parseval: the partial sums increase to V(1-V)
      for (int M = 2; M <= 200; ++M) CHECK(t.partial(M) >= t.partial(M - 1));
      CHECK(t.partial(200) <= t.variance() * (1 + 1e-12));
      CHECK(t.remainder(200) < 0.1 * t.variance());
      BallCoefficientTable big(sp, r, 20000);
      CHECK(big.remainder(20000) < 2e-3 * big.variance());
      CHECK(big.remainder(20000) < t.remainder(200));
      // extension equals a fresh build
      BallCoefficientTable ext(sp, r, 50);
      ext.extend(200);
      CHECK(ext.partial(200) == t.partial(200));
      CHECK(ext.coeff(177) == t.coeff(177));
      const int M = big.degree_for_tolerance(5e-3 * big.variance());
      CHECK(M > 0);
      CHECK(big.remainder(M) <= 5e-3 * big.variance());
      CHECK(big.remainder(M - 1) > 5e-3 * big.variance());
    }
  }
  const BallCoefficientTable full(space_params(SpaceKind::sphere(2)), pi, 10);
  CHECK(full.variance() == 0.0);
  CHECK(full.remainder(10) == 0.0);
  CHECK_THROWS_AS(BallCoefficientTable(space_params(SpaceKind::sphere(2)), -1.0, 10), DomainError);
}

TEST_CASE("Parseval remainder decays like 1/M") {
  for (auto k : test::five_families()) {
    const auto sp = space_params(k);
    BallCoefficientTable t(sp, 1.0, 8000);
    std::vector<double> Ms, rem;
    for (int M = 500; M <= 8000; M *= 2) {
      Ms.push_back(M);
      rem.push_back(t.variance() - t.partial(M));
    }
    CHECK(fit_loglog(Ms, rem).slope == doctest::Approx(-1.0).epsilon(0.1));
  }
}

TEST_CASE("Bessel main term of the coefficients") {
  // |c_m - main| / error_scale stays bounded in m
  for (auto k : test::five_families()) {
    const auto sp = space_params(k);
    std::vector<double> worst;
    for (int m : {25, 50, 100, 200, 400, 800}) {
      double w = 0.0;
      for (int i = 1; i <= 100; ++i) {
        const double r = (pi - 0.3) * i / 100;
        const auto as = ball_coefficient_asymptotic(sp, m, r);
        w = std::max(w, std::abs(ball_coefficient(sp, m, r) - as.main_term) / as.error_scale);
      }
      worst.push_back(w);
    }
    CAPTURE(sp.d);
    // the constant carries c_ab * Gamma(a+1); the ratio settles once m is past the preasymptotic range
    const double hi = *std::max_element(worst.begin(), worst.end());
    CHECK(hi < sp.c_ab * std::tgamma(sp.a + 1));
    CHECK(worst[5] < 1.1 * worst[4]);
  }
  CHECK(ball_coefficient_asymptotic(space_params(SpaceKind::sphere(2)), 3, 0.0).main_term == 0.0);
  CHECK_THROWS_AS(ball_coefficient_asymptotic(space_params(SpaceKind::sphere(2)), 3, 3.0), DomainError);
}

TEST_CASE("two-radius floor") {
  // m * (J(Mr)^2 + J(2Mr)^2) stays away from zero
  for (auto k : test::five_families()) {
    const auto sp = space_params(k);
    for (double r : {0.3, 0.7, 1.2}) {
      double lo = 1e300;
      for (int m = 20; m <= 4000; m += 7) lo = std::min(lo, m * two_radius_floor(sp, r, m));
      CAPTURE(sp.d);
      CAPTURE(r);
      CHECK(lo > 1e-3);
    }
  }
  CHECK_THROWS_AS(two_radius_floor(space_params(SpaceKind::sphere(2)), 1.6, 10), DomainError);
}

TEST_CASE("phase floor") {
  for (int d : {1, 2, 3, 4, 8, 16}) {
    const auto pf = two_radius_phase_floor(d);
    const double a = (d - 2) / 2.0;
    const double ph = (a + 1) * pi / 2 + pi / 4;
    double brute = 1e300;
    for (int i = 0; i <= 200000; ++i) {
      const double w = pi * i / 200000;
      brute = std::min(brute, std::pow(std::cos(w), 2) + std::pow(std::cos(2 * w + ph), 2));
    }
    CAPTURE(d);
    CHECK(pf.value > 0.0);
    CHECK(pf.value <= brute + 1e-14);
    CHECK(pf.value >= brute - 1e-8);
    CHECK(pf.omega >= 0.0);
    CHECK(pf.omega < pi);
  }
}

TEST_CASE("bad radius score") {
  const auto sp = space_params(SpaceKind::complex(2));
  const double r = jacobi_zero(sp.a, sp.b, 12, 3).location;
  CHECK(bad_radius_score(sp, r, 20, 0.1) < 1e-8);
  CHECK(bad_radius_score(sp, 1.0, 20, 0.1) > 0.0);
  // nonincreasing in M_max, increasing in delta
  double prev = 1e300;
  for (int M : {5, 10, 20, 40, 80}) {
    const double s = bad_radius_score(sp, 1.234, M, 0.1);
    CHECK(s <= prev);
    prev = s;
  }
  CHECK(bad_radius_score(sp, 1.234, 40, 0.5) >= bad_radius_score(sp, 1.234, 40, 0.1));
  CHECK_THROWS_AS(bad_radius_score(sp, 0.0, 10, 0.1), DomainError);
  CHECK_THROWS_AS(bad_radius_score(sp, 1.0, 10, 0.0), DomainError);
}
