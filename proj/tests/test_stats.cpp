#include <cmath>
#include <vector>

#include "doctest.h"
#include "geofriend/error.hpp"
#include "geofriend/stats.hpp"
#include "geofriend/synthgen.hpp"
#include "support/fixtures.hpp"

using namespace geofriend;
using namespace geofriend::stats;

using geofriend::testing::exact_bins;

TEST_CASE("edges follow the geometric progression from the minimum") {
  std::vector<double> v{1.0, 1000.0};
  const auto d = log_bin(v);
  REQUIRE(d.edges.size() >= 31);
  for (int k = 0; k <= 30; ++k) {
    CHECK(d.edges[k] == doctest::Approx(std::pow(10.0, k / 10.0)).epsilon(1e-12));
  }
  CHECK(d.edges.back() >= 1000.0);
  CHECK(d.counts.front() == 1);
  CHECK(d.counts.back() == 1);
}

TEST_CASE("near-identical samples still have unit mass") {
  std::vector<double> v(10, 5.0);
  v.push_back(5.001);
  const auto d = log_bin(v);
  CHECK(d.bins() <= 2);
  double mass = 0.0;
  for (std::size_t k = 0; k < d.bins(); ++k) {
    mass += d.density[k] * d.widths[k];
  }
  CHECK(std::abs(mass - 1.0) < 1e-9);
}

TEST_CASE("uniform samples match the analytic density") {
  Rng rng(11);
  std::vector<double> v(100'000);
  for (auto& x : v) {
    x = 1.0 + 999.0 * uniform01(rng);
  }
  const auto d = log_bin(v);
  int checked = 0;
  int tight = 0;
  for (std::size_t k = 0; k < d.bins(); ++k) {
    if (d.counts[k] < 100 || d.edges[k + 1] > 1000.0) {
      continue;
    }
    CAPTURE(d.counts[k]);
    const double error = std::abs(d.density[k] / (1.0 / 999.0) - 1.0);
    // A bin of 100 samples has a 10% counting error, so 5% only holds once
    // the counts are large; below that allow four standard errors.
    CHECK(error < 4.0 / std::sqrt(static_cast<double>(d.counts[k])));
    if (d.counts[k] >= 4000) {
      CHECK(error < 0.05);
      ++tight;
    }
    ++checked;
  }
  CHECK(checked > 20);
  CHECK(tight >= 5);
}

TEST_CASE("binning errors") {
  std::vector<double> neg{1.0, -2.0};
  std::vector<double> same{3.0, 3.0};
  std::vector<double> frac{1.5, 3.0};
  CHECK_THROWS_AS(log_bin(neg), Error);
  CHECK_THROWS_AS(log_bin(same), Error);
  BinningOptions discrete;
  discrete.discrete = true;
  CHECK_THROWS_AS(log_bin(frac, discrete), Error);
  BinningOptions zero;
  zero.bins_per_decade = 0;
  CHECK_THROWS_AS(log_bin(std::vector<double>{1, 2}, zero), Error);
}

TEST_CASE("discrete bins count integers") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  BinningOptions o;
  o.discrete = true;
  const auto d = log_bin(v, o);
  double mass = 0.0;
  for (std::size_t k = 0; k < d.bins(); ++k) {
    mass += d.density[k] * d.widths[k];
    if (d.counts[k] > 0) {
      CHECK(d.widths[k] == static_cast<double>(d.counts[k]));  // one sample per integer
    }
  }
  CHECK(std::abs(mass - 1.0) < 1e-12);
  CHECK(d.centers[0] == 1.0);
}

TEST_CASE("exact power law gives its exponent") {
  const auto d = exact_bins(1.0, 10, 30, [](double x) { return 3.0 * std::pow(x, -2.0); });
  const auto fit = fit_power_law(d);
  CHECK(std::abs(fit.alpha - 2.0) < 1e-9);
  CHECK(std::abs(fit.intercept - std::log10(3.0)) < 1e-9);
  CHECK(fit.bins_used == 30);
  CHECK(fit.predict(10.0) == doctest::Approx(0.03));
}

TEST_CASE("constant density gives zero exponent") {
  const auto d = exact_bins(1.0, 10, 20, [](double) { return 0.25; });
  CHECK(std::abs(fit_power_law(d).alpha) < 1e-9);
}

TEST_CASE("too few bins") {
  auto d = exact_bins(1.0, 10, 2, [](double x) { return 1.0 / x; });
  CHECK_THROWS_AS(fit_power_law(d), Error);
  d = exact_bins(1.0, 10, 5, [](double x) { return 1.0 / x; });
  CHECK_THROWS_AS(fit_double_power_law(d), Error);
  CHECK_THROWS_AS(fit_double_power_law(d, 1), Error);
  d = exact_bins(1.0, 10, 6, [](double x) { return 1.0 / x; });
  d.counts[0] = 5;
  CHECK_NOTHROW(fit_double_power_law(d));
  CHECK_THROWS_AS(fit_double_power_law(d, 3, 10), Error);
}

TEST_CASE("sparse bins can be left out of a fit") {
  auto d = exact_bins(1.0, 10, 10, [](double x) { return std::pow(x, -2.0); });
  d.counts[9] = 2;
  d.density[9] *= 100.0;  // a noisy, nearly empty bin
  CHECK(std::abs(fit_power_law(d, 3).alpha - 2.0) < 1e-9);
  CHECK(fit_power_law(d, 3).bins_used == 9);
  CHECK(std::abs(fit_power_law(d, 1).alpha - 2.0) > 0.1);
}

TEST_CASE("noiseless piecewise bins: break at 22 km, slopes 0.60 and 6.23") {
  // Edges are anchored so that 22 km is an edge.
  const double x0 = 22.0 / std::pow(10.0, 35 / 10.0);
  const auto d = exact_bins(x0, 10, 50, [](double x) {
    return x < 22.0 ? std::pow(x, -0.60) : std::pow(22.0, 6.23 - 0.60) * std::pow(x, -6.23);
  });
  const auto fit = fit_double_power_law(d);
  CHECK(std::abs(fit.d_s - 22.0) < 1e-6);
  CHECK(std::abs(fit.gamma1 - 0.60) < 1e-6);
  CHECK(std::abs(fit.gamma2 - 6.23) < 1e-6);
  CHECK(fit.sse_total < 1e-12);
  CHECK(fit.break_significant);
}

TEST_CASE("noiseless piecewise bins with a discontinuity at 18 km") {
  const double x0 = 18.0 / std::pow(10.0, 20 / 10.0);
  const auto d = exact_bins(x0, 10, 40, [](double x) {
    return x < 18.0 ? 5.0 * std::pow(x, -0.69) : 0.1 * std::pow(x, -1.47);
  });
  const auto fit = fit_double_power_law(d);
  CHECK(std::abs(fit.d_s - 18.0) < 1e-6);
  CHECK(std::abs(fit.gamma1 - 0.69) < 1e-6);
  CHECK(std::abs(fit.gamma2 - 1.47) < 1e-6);
}

TEST_CASE("ties go to the smaller break") {
  // A straight line on exact decades fits perfectly with any break.
  auto d = exact_bins(1.0, 1, 12, [](double) { return 1.0; });
  for (int k = 0; k < 12; ++k) {
    d.centers[k] = std::pow(10.0, k);
    d.density[k] = std::pow(10.0, -k);
  }
  const auto fit = fit_double_power_law(d);
  CHECK(fit.break_edge == 3);
  CHECK(fit.d_s == d.edges[3]);
  CHECK_FALSE(fit.break_significant);
}

TEST_CASE("a single power law degenerates the double fit") {
  const auto exact = fit_double_power_law(exact_bins(1.0, 10, 30, [](double x) { return std::pow(x, -2.5); }));
  CHECK(std::abs(exact.gamma1 - exact.gamma2) < 1e-9);
  CHECK_FALSE(exact.break_significant);

  // density ~ x^-1.5 on [1, 100]. The break search fits the counting noise,
  // so the relative SSE gain is not asserted here; the slopes agree.
  Rng rng(3);
  std::vector<double> v(1'000'000);
  for (auto& x : v) {
    x = std::pow(1.0 - 0.9 * uniform01(rng), -2.0);
  }
  const auto fit = fit_double_power_law(log_bin(v), 3, kDefaultMinBinCount);
  CHECK(std::abs(fit.gamma1 - fit.gamma2) < 0.2);
  CHECK(std::abs(fit.single.alpha - 1.5) < 0.05);
}

TEST_CASE("Zipf draws give back their exponent") {
  const synthgen::ZipfSampler zipf(2.5, 10'000);
  Rng rng(1);
  std::vector<double> v(100'000);
  for (auto& x : v) {
    x = zipf(rng);
  }
  BinningOptions o;
  o.discrete = true;
  const auto alpha = fit_power_law(log_bin(v, o), kDefaultMinBinCount).alpha;
  CHECK(alpha >= 2.4);
  CHECK(alpha <= 2.6);
}

TEST_CASE("least squares") {
  std::vector<double> x{0, 1, 2, 3};
  std::vector<double> y{1, 3, 5, 7};
  const auto f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.sse == doctest::Approx(0.0));
}

TEST_CASE("KS statistic") {
  std::vector<double> v{0.25, 0.75};
  CHECK(ks_statistic(v, [](double x) { return x; }) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ks_statistic({}, [](double x) { return x; }), Error);
}
