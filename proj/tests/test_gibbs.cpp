#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "pinlab/disorder.hpp"
#include "pinlab/gibbs.hpp"
#include "pinlab/renewal.hpp"
#include "pinlab/varmax.hpp"

using namespace pinlab;

namespace {

const RenewalLaw& law() {
  static const RenewalLaw l = build_law(0.5, 1.0, 0.0, 0.0);
  return l;
}

PinningModel model(std::vector<double> omega, double beta, double h) {
  const std::size_t N = omega.size() + 1;
  return PinningModel{law(), std::move(omega), beta, h, N, std::nullopt};
}

// Linear-space weights of every configuration, indexed by the interior bitmask.
std::vector<double> enumerate(const PinningModel& m) {
  const std::size_t N = m.N;
  std::vector<double> w(1U << (N - 1));
  for (std::uint32_t mask = 0; mask < w.size(); ++mask) {
    double v = 1.0;
    std::size_t last = 0;
    for (std::size_t n = 1; n < N; ++n)
      if (mask >> (n - 1) & 1U) {
        v *= m.law.K(n - last) * std::exp(m.beta * m.omega[n - 1] - m.h);
        last = n;
      }
    w[mask] = v * m.law.K(N - last);
  }
  return w;
}

std::uint32_t mask_of(const GibbsSample& s) {
  std::uint32_t mask = 0;
  for (std::size_t i = 1; i + 1 < s.indices.size(); ++i) mask |= 1U << (s.indices[i] - 1);
  return mask;
}

GibbsSample sample_of(std::uint32_t mask, std::size_t N) {
  GibbsSample s;
  s.N = N;
  s.indices.push_back(0);
  for (std::size_t n = 1; n < N; ++n)
    if (mask >> (n - 1) & 1U) s.indices.push_back(n);
  s.indices.push_back(N);
  return s;
}

}  // namespace

TEST(Partition, TwoAndThreeSiteFormulas) {
  const auto m2 = model({1.7}, 0.8, 0.3);
  const double z2 = law().K(2) + law().K(1) * law().K(1) * std::exp(0.8 * 1.7 - 0.3);
  EXPECT_NEAR(std::exp(log_partition(m2)), z2, 1e-15);

  const auto m3 = model({1.0, 2.0}, 0.0, 0.0);
  const double k1 = law().K(1), k2 = law().K(2), k3 = law().K(3);
  EXPECT_NEAR(std::exp(log_partition(m3)), k3 + 2 * k1 * k2 + k1 * k1 * k1, 1e-15);
}

TEST(Partition, FreeModelIsRenewalFunction) {
  const auto u = renewal_function(law(), 400);
  for (std::size_t N : {2, 5, 50, 400}) {
    const auto m = model(std::vector<double>(N - 1, 3.0), 0.0, 0.0);
    EXPECT_NEAR(log_partition(m), std::log(u[N]), 1e-10);
  }
}

TEST(Partition, LogSpaceSurvivesHugeRewards) {
  Stream s(1);
  const auto d = sample_coupled({0.3, 1.0}, 2000, 1, s);
  const auto m = PinningModel{law(), d.omega(), 1.0, 0.5, 2000, std::nullopt};
  const double lz = log_partition(m);
  EXPECT_TRUE(std::isfinite(lz));
  EXPECT_GT(lz, 100.0);
}

TEST(Partition, NormalizationByEnumeration) {
  Stream s(3);
  for (std::size_t N = 2; N <= 12; ++N) {
    std::vector<double> omega(N - 1);
    for (auto& w : omega) w = std::pow(s.uniform(), -2.0);
    const auto m = model(omega, 0.3, 1.0);
    const PartitionTable t(m);
    double total = 0;
    const auto w = enumerate(m);
    for (std::uint32_t mask = 0; mask < w.size(); ++mask) {
      const double lw = set_log_weight(t, sample_of(mask, N));
      EXPECT_NEAR(lw, std::log(w[mask]), 1e-10);
      total += std::exp(lw - t.log_partition());
    }
    EXPECT_NEAR(total, 1.0, 1e-9) << N;
  }
}

TEST(SetLogWeight, Examples) {
  const auto m = model({2.0}, 0.5, 0.25);
  const PartitionTable t(m);
  EXPECT_NEAR(set_log_weight(t, sample_of(0, 2)), std::log(law().K(2)), 1e-12);
  EXPECT_NEAR(set_log_weight(t, sample_of(1, 2)), 2 * std::log(law().K(1)) + 0.5 * 2.0 - 0.25, 1e-12);
  GibbsSample bad;
  bad.N = 2;
  bad.indices = {0, 1};
  EXPECT_THROW(set_log_weight(t, bad), std::invalid_argument);
}

TEST(Sampler, TwoSiteFrequencies) {
  const auto m = model({1.2}, 1.0, 0.4);
  const PartitionTable t(m);
  const double p1 = std::exp(set_log_weight(t, sample_of(1, 2)) - t.log_partition());
  Stream s(9);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += exact_sample(t, s).indices.size() == 3;
  const double se = std::sqrt(p1 * (1 - p1) / n);
  EXPECT_NEAR(static_cast<double>(hits) / n, p1, 3 * se);
}

TEST(Sampler, TotalVariationAgainstEnumeration) {
  // One heavy site dominates, so 1e5 draws resolve the law to TV < 0.01.
  std::vector<double> omega{0.2, 0.1, 0.4, 0.3, 9.0, 0.2, 0.5, 0.1, 0.3, 0.2, 0.4};
  const auto m = model(omega, 1.0, 1.5);
  const PartitionTable t(m);
  const auto w = enumerate(m);
  const double Z = std::exp(t.log_partition());
  std::vector<double> freq(w.size(), 0.0);
  Stream s(10);
  const int n = 100000;
  for (int i = 0; i < n; ++i) freq[mask_of(exact_sample(t, s))] += 1.0 / n;
  double tv = 0;
  for (std::size_t i = 0; i < w.size(); ++i) tv += 0.5 * std::abs(freq[i] - w[i] / Z);
  EXPECT_LT(tv, 0.01);
}

TEST(Sampler, FreeMarginalsMatchRenewalIdentity) {
  // beta = h = 0: P(n in I) = u(n) u(N-n) / u(N).
  const std::size_t N = 12;
  const auto m = model(std::vector<double>(N - 1, 1.0), 0.0, 0.0);
  const auto w = enumerate(m);
  const auto u = renewal_function(law(), N);
  double Z = 0;
  for (double v : w) Z += v;
  for (std::size_t n = 1; n < N; ++n) {
    double p = 0;
    for (std::uint32_t mask = 0; mask < w.size(); ++mask)
      if (mask >> (n - 1) & 1U) p += w[mask];
    EXPECT_NEAR(p / Z, u[n] * u[N - n] / u[N], 1e-12);
  }
  const PartitionTable t(m);
  Stream s(4);
  std::vector<double> count(N, 0.0);
  const int draws = 50000;
  for (int i = 0; i < draws; ++i)
    for (auto n : exact_sample(t, s).indices)
      if (n > 0 && n < N) count[n] += 1.0 / draws;
  for (std::size_t n = 1; n < N; ++n) {
    const double p = u[n] * u[N - n] / u[N];
    EXPECT_NEAR(count[n], p, 4 * std::sqrt(p * (1 - p) / draws) + 1e-12);
  }
}

TEST(Sampler, LargerPenaltyMeansFewerPoints) {
  const std::vector<double> omega(30, 1.0);
  double prev = 1.1;
  for (double h : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const PartitionTable t(model(omega, 0.2, h));
    Stream s(5);
    int big = 0;
    for (int i = 0; i < 20000; ++i) big += exact_sample(t, s).indices.size() > 2;
    const double f = big / 20000.0;
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(Truncation, FullTruncationIsIdentity) {
  Stream s(6);
  const auto d = sample_coupled({0.5, 1.0}, 200, 1, s);
  const auto full = PinningModel{law(), d.omega(), 0.01, 0.5, 200, std::nullopt};
  auto trunc = full;
  trunc.truncation = 199;
  const PartitionTable a(full), b(trunc);
  for (std::size_t n = 0; n <= 200; ++n) EXPECT_EQ(a.log_Z()[n], b.log_Z()[n]);
}

TEST(Truncation, RadonNikodymBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Stream s = Stream::derive(seed, "rn");
    const std::size_t N = 300;
    const auto d = sample_coupled({0.5, 1.0}, N, 1, s);
    const double beta = 2.0 * std::sqrt(static_cast<double>(N)) / d.b_N();
    for (std::size_t k : {1, 5, 20, 100}) {
      auto full = PinningModel{law(), d.omega(), beta, 0.5, N, std::nullopt};
      auto trunc = full;
      trunc.truncation = k;
      const double diff = log_partition(full) - log_partition(trunc);
      EXPECT_GE(diff, -1e-12);
      EXPECT_LE(diff, beta * d.b_N() * truncation_residual(d, k) + 1e-9);
    }
  }
}

TEST(Concentration, TrivialRadii) {
  const auto m = model({0.5, 4.0, 0.2}, 0.7, 0.5);
  const PartitionTable t(m);
  const PinnedSet ref{0, 0.4, 1};
  Stream s(1);
  EXPECT_EQ(concentration_probability(t, ref, 1.01, 500, s).hits, 0U);
  // delta = 0 counts draws different from ref; ref.points() are exact on the grid.
  Stream a(2), b(2);
  const auto p = concentration_probability(t, PinnedSet{0, 0.5, 1}, 0.0, 2000, a);
  std::size_t differ = 0;
  for (int i = 0; i < 2000; ++i) differ += mask_of(exact_sample(t, b)) != 2U;
  EXPECT_EQ(p.hits, differ);
  EXPECT_THROW(concentration_probability(t, ref, 0.1, 0, a), std::invalid_argument);
}

TEST(Concentration, DecaysFromN64ToN256OnCoupledDisorder) {
  const double gamma = 0.5, h = 1.0;
  auto estimate = [&](std::size_t N) {
    Stream rng = Stream::derive(1, "concentration", 0);
    const auto d = sample_coupled({0.5, 1.0}, N, 256, rng);
    const auto cont = d.continuum(256);
    const double beta_hat = 4.0 * beta_critical(cont.Y, cont.M, gamma);
    std::vector<double> pos(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) pos[i] = d.Y_disc(i);
    const auto ref = solve_dp(EnergyLandscape::from_unsorted(pos, d.M_disc(), beta_hat, gamma));
    const PinningModel m{law(), d.omega(), beta_hat * std::sqrt(static_cast<double>(N)) / d.b_N(), h, N,
                         std::nullopt};
    const PartitionTable t(m);
    Stream g = Stream::derive(1, "concentration-gibbs", N);
    return concentration_probability(t, ref.maximizer, 0.1, 4000, g).estimate;
  };
  EXPECT_LT(estimate(256), estimate(64));
}
