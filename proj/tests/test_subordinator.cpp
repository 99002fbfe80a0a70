#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "pinlab/disorder.hpp"
#include "pinlab/polymer.hpp"
#include "pinlab/stats.hpp"
#include "pinlab/subordinator.hpp"

using namespace pinlab;

namespace {

MarkedPointSet line(std::vector<double> x, std::vector<double> m) {
  MarkedPointSet s;
  s.x = std::move(x);
  s.marks = std::move(m);
  return s;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  g.back() = hi;
  return g;
}

}  // namespace

TEST(EdgeProcess, Examples) {
  const auto s = line({0.05, 0.5, 0.97}, {2.0, 5.0, 1.0});
  EXPECT_DOUBLE_EQ(edge_process(s, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(edge_process(s, 0.03), 1.0);
  EXPECT_DOUBLE_EQ(edge_process(s, 0.05), 3.0);
  EXPECT_DOUBLE_EQ(edge_process(s, 0.5), 8.0);
  EXPECT_THROW(edge_process(s, 0.6), std::domain_error);
}

TEST(EdgeProcess, MonotoneStepFunction) {
  Stream rng(2);
  const auto s = MarkedPointSet::from_continuum(sample_continuum({0.6, 1.0}, 200, rng));
  double prev = 0;
  for (int i = 0; i <= 500; ++i) {
    const double v = edge_process(s, 0.5 * i / 500.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
  double total = 0;
  for (double m : s.marks) total += m;
  EXPECT_NEAR(edge_process(s, 0.5), total, 1e-12 * total);
}

TEST(GrowthCheck, Examples) {
  const auto grid = geometric_grid(1e-3, 0.1, 40);
  EXPECT_DOUBLE_EQ(growth_check(MarkedPointSet{}, 0.5, 1.5, grid), 0.0);
  // The envelope increases on (0, e^{-q}), so a lone jump is seen at its own time.
  const auto one = line({0.94}, {0.3});
  EXPECT_NEAR(growth_check(one, 0.5, 1.5, grid), 0.3 / growth_envelope(0.06, 0.5, 1.5), 1e-12);
  EXPECT_THROW(growth_check(one, 0.5, 1.0, grid), std::domain_error);
  const std::vector<double> bad{0.05, 0.2};
  EXPECT_THROW(growth_check(one, 0.5, 1.5, bad), std::domain_error);
}

TEST(GrowthCheck, JumpAugmentationMatchesFineScan) {
  Stream rng(3);
  const auto s = MarkedPointSet::from_continuum(sample_continuum({0.5, 1.0}, 300, rng));
  const auto coarse = geometric_grid(1e-3, 0.1, 10);
  const auto fine = geometric_grid(1e-3, 0.1, 200000);
  const double a = growth_check(s, 0.5, 1.5, coarse);
  double scan = 0;
  for (double t : fine) scan = std::max(scan, edge_process(s, t) / growth_envelope(t, 0.5, 1.5));
  EXPECT_GE(a, scan * (1 - 1e-12));
  EXPECT_LE(a, scan * 1.01);
}

TEST(Band, PhiExamples) {
  EXPECT_DOUBLE_EQ(band_area_phi(0.0), 0.0);
  EXPECT_DOUBLE_EQ(band_area_phi(0.25), 0.5);
  EXPECT_NEAR(band_area_phi(3.0 / 16.0), 0.25, 1e-15);
  EXPECT_THROW(band_area_phi(0.3), std::domain_error);
  // Band {|y| <= phi(t)} inside D has area 2 t.
  for (double t : {0.01, 0.1, 0.2}) {
    const double a = band_area_phi(t);
    EXPECT_NEAR(0.5 - 2 * (0.5 - a) * (0.5 - a), 2 * t, 1e-15);
  }
}

TEST(Band, ExamplesAndDominance) {
  MarkedPointSet env;
  env.marks = {1.0, 2.0, 4.0};
  env.x = {0.5, 0.3, 0.5};
  env.y = {0.0, 0.2, -0.45};
  EXPECT_DOUBLE_EQ(band_U(env, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(band_U(env, 0.2), 3.0);
  EXPECT_DOUBLE_EQ(band_U(env, 0.5), 7.0);
  EXPECT_TRUE(std::isnan(band_process(env, 0.3).W));
  EXPECT_THROW(band_U(line({0.5}, {1.0}), 0.1), std::invalid_argument);

  Stream rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = sample_environment(1.2, 500, rng).marked();
    for (int i = 0; i <= 25; ++i) {
      const auto v = band_process(m, 0.01 * i);
      EXPECT_GE(v.W, v.U);
    }
  }
}

TEST(Band, WHasStationaryIncrements) {
  const double s = 1.0 / 32;
  const std::vector<double> starts{0.0, 1.0 / 16, 1.0 / 8};
  std::vector<std::vector<double>> inc(starts.size());
  Stream rng(11);
  for (int e = 0; e < 1000; ++e) {
    const auto m = sample_environment(1.5, 1000, rng).marked();
    for (std::size_t j = 0; j < starts.size(); ++j)
      inc[j].push_back(band_process(m, starts[j] + s).W - band_process(m, starts[j]).W);
  }
  auto mean_se = [](const std::vector<double>& v) {
    stats::CompensatedSum a, b;
    for (double x : v) a.add(x);
    const double mu = a.value() / static_cast<double>(v.size());
    for (double x : v) b.add((x - mu) * (x - mu));
    return std::pair{mu, std::sqrt(b.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
  };
  for (std::size_t j = 1; j < starts.size(); ++j) {
    const auto [m0, s0] = mean_se(inc[0]);
    const auto [mj, sj] = mean_se(inc[j]);
    EXPECT_LE(std::abs(m0 - mj), 3 * std::hypot(s0, sj)) << starts[j];
  }
}

TEST(Continuum, ExceedanceCountsArePoisson) {
  // #{i : M_i > z} ~ Poisson(z^{-alpha}) for the continuum marks.
  const double alpha = 0.7;
  for (double z : {1.0, 2.0}) {
    const double lambda = std::pow(z, -alpha);
    const int bins = 5;  // 0..3 and "4 or more"
    std::vector<double> obs(bins, 0.0);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
      Stream rng = Stream::derive(static_cast<std::uint64_t>(r), "poisson");
      const auto c = sample_continuum({alpha, 1.0}, 40, rng);
      int n = 0;
      for (double m : c.M) n += m > z;
      obs[std::min(n, bins - 1)] += 1;
    }
    boost::math::poisson_distribution<> P(lambda);
    double chi2 = 0;
    for (int b = 0; b < bins; ++b) {
      const double p = b + 1 < bins ? boost::math::pdf(P, b) : boost::math::cdf(boost::math::complement(P, b - 1));
      const double e = p * reps;
      chi2 += (obs[b] - e) * (obs[b] - e) / e;
    }
    boost::math::chi_squared_distribution<> X(bins - 1);
    EXPECT_LT(chi2, boost::math::quantile(X, 0.999)) << z;
  }
}
