#include <gtest/gtest.h>

#include <cmath>

#include "pinlab/disorder.hpp"
#include "pinlab/varmax.hpp"

using namespace pinlab;

namespace {

EnergyLandscape random_landscape(Stream& s, std::size_t n, double alpha, double gamma) {
  std::vector<double> pos, w;
  double T = 0;
  for (std::size_t i = 0; i < n; ++i) {
    T += s.exponential();
    w.push_back(std::pow(T, -1.0 / alpha));
    pos.push_back(s.uniform());
  }
  return EnergyLandscape::from_unsorted(pos, w, 0.5 + 3.0 * s.uniform(), gamma);
}

// Independent oracle: every subset scored with set_entropy on a PinnedSet.
double oracle_max(const EnergyLandscape& L) {
  double best = -INFINITY;
  const std::size_t n = L.size();
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<double> pts{0.0};
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) {
        pts.push_back(L.positions[i]);
        w += L.weights[i];
      }
    pts.push_back(1.0);
    best = std::max(best, L.beta * w - L.c_entropy * set_entropy(PinnedSet(pts), L.gamma));
  }
  return best;
}

}  // namespace

TEST(Energy, Examples) {
  const EnergyLandscape L{{0.3, 0.7}, {2, 1}, 1.0, 0.5, 1.0};
  EXPECT_DOUBLE_EQ(energy(L, PinnedSet{0, 0.3, 1}), 2.0);
  EXPECT_DOUBLE_EQ(energy(L, PinnedSet{}), 0.0);
  EXPECT_DOUBLE_EQ(energy(L, PinnedSet{0, 0.3, 0.7, 1}), 3.0);
  EXPECT_DOUBLE_EQ(energy(L, PinnedSet{0, 0.5, 1}), 0.0);
  EXPECT_THROW(objective(L, PinnedSet{0, 0.5, 1}), std::invalid_argument);
}

TEST(Objective, Examples) {
  const EnergyLandscape zero{{}, {}, 0.0, 0.5, 1.0};
  EXPECT_DOUBLE_EQ(objective(zero, PinnedSet{}), -1.0);
  const EnergyLandscape one{{0.5}, {0.5}, 1.0, 0.5, 1.0};
  EXPECT_NEAR(objective(one, PinnedSet{0, 0.5, 1}), 0.5 - 2 * std::sqrt(0.5), 1e-12);
  // Gaps of the full set are 0.3, 0.4, 0.3.
  const EnergyLandscape two{{0.3, 0.7}, {1, 1}, 1.0, 0.5, 1.0};
  EXPECT_NEAR(objective(two, PinnedSet{0, 0.3, 0.7, 1}), 2 - (2 * std::sqrt(0.3) + std::sqrt(0.4)), 1e-12);
  EXPECT_NEAR(objective(two, PinnedSet{0, 0.3, 0.7, 1}), 0.2720994, 1e-7);
}

TEST(Solvers, SmallExamples) {
  const EnergyLandscape one{{0.5}, {0.5}, 1.0, 0.5, 1.0};
  for (auto solve : {solve_bruteforce, solve_dp}) {
    const auto r = solve(one);
    EXPECT_EQ(r.maximizer, (PinnedSet{0, 0.5, 1}));
    EXPECT_NEAR(r.value, -0.9142136, 1e-7);
  }
  const EnergyLandscape flat{{0.2, 0.6}, {5, 5}, 0.0, 0.5, 1.0};
  for (auto solve : {solve_bruteforce, solve_dp}) {
    const auto r = solve(flat);
    EXPECT_TRUE(r.maximizer.trivial());
    EXPECT_DOUBLE_EQ(r.value, -1.0);
  }
  const EnergyLandscape two{{0.3, 0.7}, {1, 1}, 1.0, 0.5, 1.0};
  for (auto solve : {solve_bruteforce, solve_dp}) {
    const auto r = solve(two);
    EXPECT_EQ(r.maximizer, (PinnedSet{0, 0.3, 0.7, 1}));
    EXPECT_NEAR(r.value, 0.2720994, 1e-7);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0, 1}));
  }
  const EnergyLandscape empty{{}, {}, 2.0, 0.5, 3.0};
  EXPECT_TRUE(solve_dp(empty).maximizer.trivial());
  EXPECT_DOUBLE_EQ(solve_dp(empty).value, -3.0);
}

TEST(Solvers, BruteForceSizeLimit) {
  Stream s(1);
  auto L = random_landscape(s, 26, 0.5, 0.5);
  EXPECT_THROW(solve_bruteforce(L), std::length_error);
  EXPECT_NO_THROW(solve_dp(L));
}

TEST(Solvers, DpMatchesBruteForceAndOracle) {
  Stream s(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    const double alpha = rep % 3 == 0 ? 0.3 : rep % 3 == 1 ? 0.5 : 0.8;
    const double gamma = 0.3 + 0.5 * s.uniform();
    const auto L = random_landscape(s, 12, alpha, gamma);
    const auto b = solve_bruteforce(L);
    const auto d = solve_dp(L);
    ASSERT_EQ(b.maximizer, d.maximizer) << rep;
    ASSERT_EQ(b.selected, d.selected);
    const double tol = 1e-12 * std::max(1.0, std::abs(b.value));
    ASSERT_NEAR(b.value, d.value, tol);
    if (rep < 200) {
      ASSERT_NEAR(b.value, oracle_max(L), tol);
    }
    // Value is recomputable from the maximizer and never below the trivial set.
    ASSERT_NEAR(d.value, objective(L, d.maximizer), tol);
    ASSERT_GE(d.value, -L.c_entropy);
    for (double x : d.maximizer.interior()) ASSERT_GE(landscape_index(L, x), 0);
  }
}

TEST(Solvers, ValueConvexNonDecreasingInBeta) {
  Stream s(5);
  for (int rep = 0; rep < 50; ++rep) {
    auto L = random_landscape(s, 10, 0.5, 0.5);
    std::vector<double> u;
    for (int i = 0; i <= 40; ++i) {
      L.beta = 0.1 * i;
      u.push_back(solve_dp(L).value);
    }
    for (std::size_t i = 1; i < u.size(); ++i) EXPECT_GE(u[i], u[i - 1] - 1e-12);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) EXPECT_LE(2 * u[i], u[i - 1] + u[i + 1] + 1e-10);
  }
}

TEST(Solvers, ScaleInvariance) {
  Stream s(6);
  for (int rep = 0; rep < 200; ++rep) {
    auto L = random_landscape(s, 14, 0.6, 0.4);
    const double c = 0.2 + 4 * s.uniform();
    EnergyLandscape Lc = L;
    Lc.beta = L.beta * c;
    Lc.c_entropy = c;
    const auto a = solve_dp(L), b = solve_dp(Lc);
    EXPECT_EQ(a.maximizer, b.maximizer);
    EXPECT_NEAR(b.value, c * a.value, 1e-10 * std::max(1.0, std::abs(b.value)));
  }
}

TEST(Solvers, ReflectionEquivariance) {
  Stream s(7);
  for (int rep = 0; rep < 200; ++rep) {
    const auto L = random_landscape(s, 14, 0.5, 0.6);
    std::vector<double> pos, w;
    for (std::size_t i = L.size(); i-- > 0;) {
      pos.push_back(1.0 - L.positions[i]);
      w.push_back(L.weights[i]);
    }
    const EnergyLandscape R{pos, w, L.beta, L.gamma, L.c_entropy};
    const auto a = solve_dp(L), b = solve_dp(R);
    EXPECT_NEAR(a.value, b.value, 1e-12 * std::max(1.0, std::abs(a.value)));
    EXPECT_NEAR(hausdorff(a.maximizer.reflected(), b.maximizer), 0.0, 1e-12);
  }
}

TEST(Solvers, MonotoneInTruncation) {
  Stream s(8);
  for (int rep = 0; rep < 50; ++rep) {
    const auto c = sample_continuum({0.5, 1.0}, 40, s);
    double prev = -INFINITY;
    for (std::size_t k = 1; k <= 40; ++k) {
      const std::span<const double> Y(c.Y.data(), k), M(c.M.data(), k);
      const double u = solve_dp(EnergyLandscape::from_unsorted(Y, M, 2.0, 0.5)).value;
      EXPECT_GE(u, prev - 1e-12);
      prev = u;
    }
  }
}

TEST(Solvers, EdgeConfinementBelowBetaZero) {
  // With S = sum of weights and beta < (eps^g + (1-eps)^g - 1) / S the
  // maximizer avoids (eps, 1-eps).
  Stream s(9);
  for (int rep = 0; rep < 300; ++rep) {
    const auto c = sample_continuum({0.5, 1.0}, 20, s);
    double S = 0;
    for (double m : c.M) S += m;
    const double eps = 0.05 + 0.4 * s.uniform();
    const double gamma = 0.5;
    const double beta0 = (std::pow(eps, gamma) + std::pow(1 - eps, gamma) - 1) / S;
    const auto r = solve_dp(EnergyLandscape::from_unsorted(c.Y, c.M, beta0 * (1 - 1e-9) * s.uniform(), gamma));
    for (double x : r.maximizer.interior()) EXPECT_TRUE(x <= eps || x >= 1 - eps);
  }
}

TEST(Constrained, Examples) {
  const EnergyLandscape one{{0.5}, {0.5}, 1.0, 0.5, 1.0};
  const auto ref = solve_bruteforce(one);
  EXPECT_DOUBLE_EQ(constrained_max(one, ref, 0.3), -1.0);
  EXPECT_DOUBLE_EQ(constrained_max(one, ref, 0.0), ref.value);
  EXPECT_EQ(constrained_max(one, ref, 1.5), -kInf);
}

TEST(Constrained, BoundedByUnconstrained) {
  Stream s(10);
  for (int rep = 0; rep < 100; ++rep) {
    const auto L = random_landscape(s, 10, 0.5, 0.5);
    const auto ref = solve_dp(L);
    double prev = ref.value;
    for (double delta : {0.0, 0.05, 0.1, 0.2, 0.4}) {
      const double v = constrained_max(L, ref, delta);
      EXPECT_LE(v, ref.value + 1e-12);
      EXPECT_LE(v, prev + 1e-12);
      prev = v;
    }
  }
}

TEST(BetaCritical, Examples) {
  const std::vector<double> p1{0.5}, w1{1.0};
  EXPECT_NEAR(beta_critical(p1, w1, 0.5), 2 * std::sqrt(0.5) - 1, 1e-12);
  // Ratios: singleton (sqrt0.3+sqrt0.7-1)/1 = 0.3843835 (twice), pair
  // (2 sqrt0.3 + sqrt0.4 - 1)/2 = 0.3639503.
  const std::vector<double> p2{0.3, 0.7}, w2{1.0, 1.0};
  EXPECT_NEAR(beta_critical(p2, w2, 0.5), 0.3639503, 1e-7);
  EXPECT_NEAR(beta_critical(p2, w2, 0.5), (2 * std::sqrt(0.3) + std::sqrt(0.4) - 1) / 2, 1e-12);
  EXPECT_EQ(beta_critical({}, {}, 0.5), kInf);
}

TEST(BetaCritical, EnumerationMatchesBisection) {
  Stream s(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto L = random_landscape(s, 3 + rep % 18, rep % 2 ? 0.3 : 0.8, 0.3 + 0.5 * s.uniform());
    const double a = beta_critical(L);
    const double b = beta_critical(L, true);
    EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, a)) << rep;
    EXPECT_GT(a, 0.0);
  }
}

TEST(BetaCritical, Dichotomy) {
  Stream s(12);
  for (int rep = 0; rep < 200; ++rep) {
    auto L = random_landscape(s, 30, 0.5, 0.5);
    const double bc = beta_critical(L);
    L.beta = bc - 1e-9;
    EXPECT_TRUE(solve_dp(L).maximizer.trivial());
    L.beta = bc + 1e-9;
    EXPECT_FALSE(solve_dp(L).maximizer.trivial());
  }
}
