#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "geodisc/discrepancy.hpp"
#include "geodisc/kernels.hpp"
#include "geodisc/pointsets.hpp"
#include "geodisc/spectral.hpp"
#include "test_util.hpp"

using namespace geodisc;
using std::numbers::pi;

namespace {

WeightedPointSet icosahedron() {
  return load_pointset(test::data_dir() + "/icosahedron.txt", PointFormat::TDesign);
}

// Exact L2 discrepancy on S^2 from pairwise cap intersections.
double lune_oracle(const WeightedPointSet& ps, double r) {
  const double V = std::sin(r / 2) * std::sin(r / 2);
  double s = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j)
    for (std::size_t k = 0; k < ps.size(); ++k)
      s += ps.weight(j) * ps.weight(k) * test::cap_intersection_s2(r, ps.distance(j, k));
  return s - V * V;
}

// Rotation about the axis (1, 2, 2) / 3 by angle t.
WeightedPointSet rotate(const WeightedPointSet& ps, double t) {
  const double u[3] = {1.0 / 3, 2.0 / 3, 2.0 / 3};
  const double c = std::cos(t), s = std::sin(t);
  std::vector<double> out;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto p = ps.point(j);
    const double dot = u[0] * p[0] + u[1] * p[1] + u[2] * p[2];
    const double cr[3] = {u[1] * p[2] - u[2] * p[1], u[2] * p[0] - u[0] * p[2], u[0] * p[1] - u[1] * p[0]};
    for (int i = 0; i < 3; ++i) out.push_back(p[i] * c + cr[i] * s + u[i] * dot * (1 - c));
  }
  return WeightedPointSet::from_flat(ps.space(), out, ps.weights());
}

}  // namespace

TEST_CASE("Gram spectrum examples") {
  const Space s2(SpaceKind::sphere(2));
  // one point: S_m = d_m
  const auto one = WeightedPointSet::from_vectors(s2, {{0, 0, 1}});
  const auto g = gram_spectrum(one, 5);
  for (int m = 1; m <= 5; ++m) CHECK(g.S[m - 1] == doctest::Approx(2 * m + 1).epsilon(1e-14));
  // antipodal pair: S_m = d_m (1 + (-1)^m) / 2
  const auto pair = WeightedPointSet::from_vectors(s2, {{0, 0, 1}, {0, 0, -1}});
  const auto gp = gram_spectrum(pair, 6);
  for (int m = 1; m <= 6; ++m) CHECK(test::close(gp.S[m - 1], m % 2 ? 0.0 : 2 * m + 1, 0, 1e-12));
  CHECK(gp.clamped == 0);
  // icosahedron is a 5-design
  const auto ico = icosahedron();
  const auto gi = gram_spectrum(ico, 8);
  for (int m = 1; m <= 5; ++m) CHECK(std::abs(gi.S[m - 1]) < 1e-12);
  CHECK(gi.S[5] > 0.1);
}

TEST_CASE("serial and parallel kernels agree") {
  for (auto k : test::five_families()) {
    const Space sp(k);
    if (!sp.has_vector_model()) continue;
    const auto ps = sample_uniform(sp, 37, 5);
    const auto ser = gram_spectrum_serial(ps, 60);
    const auto par = gram_spectrum_parallel(ps, 60, 2);
    for (int m = 0; m < 60; ++m) CHECK(test::close(par[m], ser[m], 1e-9, 1e-9));
    // bit-identical across thread counts
    for (int t : {1, 3, 4}) CHECK(gram_spectrum_parallel(ps, 60, t) == par);

    BallCoefficientTable tab(sp.params(), 0.9, 80);
    const TruncatedBallKernel K(sp.params().a, sp.params().b, tab.weights(), 2);
    const double a = pair_kernel_sum_serial(ps, K);
    CHECK(pair_kernel_sum_parallel(ps, K, 1) == doctest::Approx(a).epsilon(1e-12));
    CHECK(pair_kernel_sum_parallel(ps, K, 3) == pair_kernel_sum_parallel(ps, K, 1));

    const double vol = sp.ball_volume(0.9);
    const auto m1 = montecarlo_serial(ps, 0.9, vol, 10000, 3);
    const auto m2 = montecarlo_parallel(ps, 0.9, vol, 10000, 3, 3);
    CHECK(m1.samples == 10000);
    CHECK(m1.sum2 == m2.sum2);
    CHECK(m1.sum4 == m2.sum4);
  }
  CHECK(pair_block_count(1) == 0);
  CHECK(pair_block_count(2) == 1);
  CHECK(pair_block_count(10000) == 64);
}

TEST_CASE("kernel table matches direct evaluation") {
  for (auto k : test::five_families()) {
    const auto sp = space_params(k);
    for (int M : {10, 200, 1500}) {
      BallCoefficientTable tab(sp, 1.3, M);
      const TruncatedBallKernel K(sp.a, sp.b, tab.weights());
      double scale = 0.0;
      for (double w : tab.weights()) scale += std::abs(w);
      for (int i = 0; i <= 997; ++i) {
        const double rho = pi * i / 997;
        CHECK(std::abs(K(rho) - K.exact(rho)) <= 1e-11 * scale);
      }
      CHECK(K.panels() >= 32);
      CHECK(K(0.0) == doctest::Approx(tab.partial(M)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single point and full radius") {
  for (auto k : test::five_families()) {
    const Space sp(k);
    if (!sp.has_vector_model()) continue;
    const auto one = sample_uniform(sp, 1, 9);
    for (double r : {0.5, 1.5, 2.5}) {
      const double V = sp.ball_volume(r);
      DiscrepancyOptions opt;
      opt.tol = 1e-3 * V * (1 - V);
      const auto rep = l2_discrepancy_spectral(one, r, opt);
      CHECK(rep.value <= V * (1 - V) + 1e-15);
      CHECK(rep.value + rep.tail_bound >= V * (1 - V) - 1e-15);
      CHECK(rep.completed == doctest::Approx(V * (1 - V)).epsilon(1e-10));
    }
    const auto many = sample_uniform(sp, 20, 4);
    const auto full = l2_discrepancy_spectral(many, pi);
    CHECK(full.value == 0.0);
    CHECK(full.tail_bound == 0.0);
  }
}

TEST_CASE("spectral value brackets the exact S^2 value") {
  const Space s2(SpaceKind::sphere(2));
  const std::vector<WeightedPointSet> sets = {
      WeightedPointSet::from_vectors(s2, {{0, 0, 1}, {0, std::sin(0.4), std::cos(0.4)}}),
      WeightedPointSet::from_vectors(s2, {{0, 0, 1}, {1, 0, 0}}, {0.3, 0.7}), sample_uniform(s2, 25, 8),
      fibonacci_sphere(50), icosahedron()};
  for (const auto& ps : sets) {
    for (double r : {0.3, 0.7, 1.2, 2.0, 2.9}) {
      const double truth = lune_oracle(ps, r);
      DiscrepancyOptions opt;
      opt.tol = 1e-5;
      for (auto method : {SpectralMethod::Gram, SpectralMethod::KernelTable}) {
        opt.method = method;
        const auto rep = l2_discrepancy_spectral(ps, r, opt);
        CAPTURE(ps.size());
        CAPTURE(r);
        CHECK(rep.tail_bound <= 1e-5);
        CHECK(rep.value <= truth + 1e-12);
        CHECK(rep.value + rep.tail_bound >= truth - 1e-12);
        CHECK(std::abs(rep.completed - truth) <= rep.tail_bound);
      }
    }
  }
}

TEST_CASE("Gram and kernel methods agree at a fixed degree") {
  for (auto k : test::five_families()) {
    const Space sp(k);
    if (!sp.has_vector_model()) continue;
    const auto ps = sample_uniform(sp, 80, 21);
    DiscrepancyOptions g, t;
    g.fixed_degree = t.fixed_degree = 300;
    g.method = SpectralMethod::Gram;
    t.method = SpectralMethod::KernelTable;
    const auto a = l2_discrepancy_spectral_sum(ps, {0.6, 1.2}, g);
    const auto b = l2_discrepancy_spectral_sum(ps, {0.6, 1.2}, t);
    CHECK(a.method == "gram");
    CHECK(b.method == "kernel");
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-9));
    // the sum over radii is the sum of the single-radius values
    const auto r1 = l2_discrepancy_spectral(ps, 0.6, g), r2 = l2_discrepancy_spectral(ps, 1.2, g);
    CHECK(a.value == doctest::Approx(r1.value + r2.value).epsilon(1e-12));
    CHECK(a.tail_bound == doctest::Approx(r1.tail_bound + r2.tail_bound).epsilon(1e-12));
  }
}

TEST_CASE("per-degree contributions") {
  const auto ps = sample_uniform(Space(SpaceKind::complex(2)), 30, 2);
  DiscrepancyOptions opt;
  opt.per_m = true;
  const auto rep = l2_discrepancy_spectral(ps, 1.0, opt);
  REQUIRE(static_cast<int>(rep.per_m.size()) == rep.M_used);
  double s = 0.0;
  for (double v : rep.per_m) {
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(s == doctest::Approx(rep.value).epsilon(1e-13));
  opt.method = SpectralMethod::KernelTable;
  CHECK_THROWS_AS(l2_discrepancy_spectral(ps, 1.0, opt), DomainError);
}

TEST_CASE("Monte Carlo agrees with the spectral value") {
  for (auto k : test::five_families()) {
    const Space sp(k);
    if (!sp.has_vector_model()) continue;
    const auto ps = sample_uniform(sp, 30, 13);
    for (double r : {0.8, 1.6}) {
      const auto rep = l2_discrepancy_spectral(ps, r);
      const auto mc = l2_discrepancy_montecarlo(ps, r, 200000, 77);
      CAPTURE(sp.name());
      CAPTURE(r);
      CHECK(mc.samples == 200000);
      CHECK(std::abs(mc.estimate - rep.completed) < 4 * mc.std_error + rep.tail_bound);
    }
    CHECK(l2_discrepancy_montecarlo(ps, pi, 2000, 1).estimate == 0.0);
  }
  const auto ps = sample_uniform(Space(SpaceKind::sphere(2)), 5, 1);
  CHECK_THROWS_AS(l2_discrepancy_montecarlo(ps, 1.0, 999, 1), DomainError);
}

TEST_CASE("expectation over i.i.d. sets is V(1-V)/N") {
  for (auto k : {SpaceKind::sphere(2), SpaceKind::complex(2)}) {
    const Space sp(k);
    const double r = 1.1, V = sp.ball_volume(r);
    const std::size_t N = 40;
    const int reps = 400;
    double s = 0, s2 = 0;
    for (int i = 0; i < reps; ++i) {
      const double v = l2_discrepancy_spectral(sample_uniform(sp, N, 1000 + i), r).completed;
      s += v;
      s2 += v * v;
    }
    const double mean = s / reps, se = std::sqrt((s2 / reps - mean * mean) / (reps - 1));
    CHECK(std::abs(mean - V * (1 - V) / N) < 4 * se);
  }
}

TEST_CASE("duplicate padding leaves the discrepancy unchanged") {
  const Space sp(SpaceKind::quaternion(2));
  const auto ps = sample_uniform(sp, 17, 3);
  const auto padded = duplicate_pad(ps, 40);
  CHECK(padded.size() == 40);
  DiscrepancyOptions opt;
  opt.fixed_degree = 400;
  for (auto method : {SpectralMethod::Gram, SpectralMethod::KernelTable}) {
    opt.method = method;
    CHECK(l2_discrepancy_spectral(padded, 0.9, opt).value ==
          doctest::Approx(l2_discrepancy_spectral(ps, 0.9, opt).value).epsilon(1e-10));
  }
}

TEST_CASE("matrix-backed sets") {
  const Space s2(SpaceKind::sphere(2));
  const auto ps = sample_uniform(s2, 12, 6);
  std::vector<std::vector<double>> rows(12, std::vector<double>(12));
  for (std::size_t j = 0; j < 12; ++j)
    for (std::size_t k = 0; k < 12; ++k) rows[j][k] = j == k ? 0.0 : ps.distance(j, k);
  for (std::size_t j = 0; j < 12; ++j)
    for (std::size_t k = j + 1; k < 12; ++k) rows[k][j] = rows[j][k];
  const auto mat = WeightedPointSet::from_matrix(s2, std::make_shared<const DistanceMatrix>(rows));
  DiscrepancyOptions opt;
  opt.fixed_degree = 200;
  CHECK(l2_discrepancy_spectral(mat, 1.0, opt).value ==
        doctest::Approx(l2_discrepancy_spectral(ps, 1.0, opt).value).epsilon(1e-10));
  CHECK_THROWS_AS(l2_discrepancy_montecarlo(mat, 1.0, 5000, 1), UnsupportedError);
}

TEST_CASE("Cassels sums and cubature strength") {
  const Space s2(SpaceKind::sphere(2));
  const auto ico = icosahedron();
  const auto st = cubature_strength(ico);
  CHECK(st.strength == 5);
  CHECK_FALSE(st.capped);
  CHECK(cubature_strength(rotate(ico, 0.77)).strength == 5);
  CHECK(cubature_strength(WeightedPointSet::from_vectors(s2, {{0, 0, 1}, {0, 0, -1}})).strength == 1);
  CHECK(cubature_strength(WeightedPointSet::from_vectors(s2, {{0, 0, 1}})).strength == 0);
  CHECK(test::close(cassels_sum(ico, 5), 0.0, 0, 1e-11));
  // the spectrum is rotation invariant
  const auto ps = sample_uniform(s2, 15, 3);
  const auto a = gram_spectrum(ps, 30), b = gram_spectrum(rotate(ps, 2.1), 30);
  for (int m = 0; m < 30; ++m) CHECK(test::close(b.S[m], a.S[m], 1e-9, 1e-12));
  CHECK(cassels_sum(ps, 30) == doctest::Approx(std::accumulate(a.S.begin(), a.S.end(), 0.0)).epsilon(1e-12));
  CHECK_THROWS_AS(cassels_sum(ps, 0), DomainError);
}

TEST_CASE("truncation error at the degree cap") {
  const auto ps = sample_uniform(Space(SpaceKind::sphere(2)), 10, 1);
  DiscrepancyOptions opt;
  opt.tol = 1e-12;
  opt.degree_cap = 300;
  try {
    l2_discrepancy_spectral(ps, 1.0, opt);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.best().M_used == 300);
    CHECK_FALSE(e.best().converged);
    CHECK(e.best().tail_bound > 1e-12);
    CHECK(e.best().value > 0.0);
  }
  CHECK_THROWS_AS(l2_discrepancy_spectral(ps, 3.5), DomainError);
  opt.tol = -1;
  CHECK_THROWS_AS(l2_discrepancy_spectral(ps, 1.0, opt), DomainError);
}
