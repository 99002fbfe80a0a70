#ifndef PINLAB_VARMAX_HPP
#define PINLAB_VARMAX_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinlab/geometry.hpp"

namespace pinlab {

/// Weighted interior points for the problem max_I beta*sigma(I) - c*E(I).
struct EnergyLandscape {
  std::vector<double> positions;  // strictly increasing, inside (0,1)
  std::vector<double> weights;    // > 0
  double beta = 1.0;
  double gamma = 0.5;
  double c_entropy = 1.0;

  /// Sorts (position, weight) pairs by position; `order` receives the input
  /// index of every sorted slot when non-null.
  static EnergyLandscape from_unsorted(std::span<const double> pos, std::span<const double> w, double beta,
                                       double gamma, double c_entropy = 1.0,
                                       std::vector<std::size_t>* order = nullptr) {
    if (pos.size() != w.size()) throw std::invalid_argument("EnergyLandscape: length mismatch");
    std::vector<std::size_t> idx(pos.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
    EnergyLandscape L;
    L.beta = beta;
    L.gamma = gamma;
    L.c_entropy = c_entropy;
    L.positions.reserve(idx.size());
    L.weights.reserve(idx.size());
    for (auto i : idx) {
      L.positions.push_back(pos[i]);
      L.weights.push_back(w[i]);
    }
    L.validate();
    if (order) *order = std::move(idx);
    return L;
  }

  [[nodiscard]] std::size_t size() const { return positions.size(); }

  void validate() const {
    check_entropy_exponent(gamma);
    if (positions.size() != weights.size()) throw std::invalid_argument("EnergyLandscape: length mismatch");
    if (!(beta >= 0.0)) throw std::domain_error("EnergyLandscape: beta must be >= 0");
    if (!(c_entropy > 0.0)) throw std::domain_error("EnergyLandscape: c_entropy must be > 0");
    double prev = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      if (!(positions[i] - prev > kPointTolerance) || !(positions[i] < 1.0 - kPointTolerance))
        throw std::invalid_argument("EnergyLandscape: positions must be strictly increasing inside (0,1)");
      if (!(weights[i] > 0.0)) throw std::invalid_argument("EnergyLandscape: weights must be positive");
      prev = positions[i];
    }
  }

  [[nodiscard]] PinnedSet set_of(std::span<const std::size_t> selected) const {
    std::vector<double> p;
    p.reserve(selected.size() + 2);
    p.push_back(0.0);
    for (auto i : selected) p.push_back(positions[i]);
    p.push_back(1.0);
    return PinnedSet(std::move(p));
  }
};

struct VarSolution {
  PinnedSet maximizer;
  double value = -1.0;
  std::vector<std::size_t> selected;  // ascending landscape indices
};

/// Landscape index at x, or -1 when x is not a landscape position.
inline std::ptrdiff_t landscape_index(const EnergyLandscape& L, double x) {
  auto it = std::lower_bound(L.positions.begin(), L.positions.end(), x - kPointTolerance);
  if (it != L.positions.end() && *it <= x + kPointTolerance) return it - L.positions.begin();
  return -1;
}

inline double energy(const EnergyLandscape& L, const PinnedSet& I) {
  double e = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i)
    if (I.contains(L.positions[i])) e += L.weights[i];
  return e;
}

inline double objective(const EnergyLandscape& L, const PinnedSet& I) {
  for (double x : I.interior())
    if (landscape_index(L, x) < 0)
      throw std::invalid_argument("objective: set contains a point that is not a landscape position");
  return L.beta * energy(L, I) - L.c_entropy * set_entropy(I, L.gamma);
}

inline constexpr std::size_t kMaxBruteForce = 25;

namespace detail {

/// c * (p_j - p_i)^gamma for nodes 0 (=0), 1..n (positions), n+1 (=1).
class GapCostTable {
 public:
  GapCostTable(std::span<const double> positions, double gamma, double c) : n_(positions.size() + 2) {
    std::vector<double> p(n_);
    p.front() = 0.0;
    p.back() = 1.0;
    std::copy(positions.begin(), positions.end(), p.begin() + 1);
    cost_.assign(n_ * n_, 0.0);
    for (std::size_t j = 1; j < n_; ++j)
      for (std::size_t i = 0; i < j; ++i) cost_[j * n_ + i] = c * std::pow(p[j] - p[i], gamma);
  }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return cost_[j * n_ + i]; }
  [[nodiscard]] std::size_t nodes() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> cost_;
};

struct DpResult {
  double value;
  std::vector<std::size_t> selected;
};

/// best[j] = max_{i<j} best[i] - cost(i,j) + beta*w_j. Ties: fewer points,
/// then the smallest predecessor index.
template <class Cost>
DpResult run_dp(std::span<const double> weights, double beta, Cost&& cost) {
  const std::size_t n = weights.size();
  const std::size_t nodes = n + 2;
  std::vector<double> best(nodes, -kInf);
  std::vector<std::size_t> count(nodes, 0), prev(nodes, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j < nodes; ++j) {
    double b = -kInf;
    std::size_t bc = 0, bp = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const double cand = best[i] - cost(i, j);
      if (cand > b || (cand == b && count[i] < bc)) {
        b = cand;
        bc = count[i];
        bp = i;
      }
    }
    const bool interior = j + 1 < nodes;
    best[j] = b + (interior ? beta * weights[j - 1] : 0.0);
    count[j] = bc + (interior ? 1 : 0);
    prev[j] = bp;
  }
  DpResult r;
  r.value = best[nodes - 1];
  for (std::size_t j = prev[nodes - 1]; j != 0; j = prev[j]) r.selected.push_back(j - 1);
  std::reverse(r.selected.begin(), r.selected.end());
  return r;
}

inline double subset_entropy(const GapCostTable& cost, std::uint32_t mask, std::size_t n) {
  double e = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) {
      e += cost(last, i + 1);
      last = i + 1;
    }
  }
  return e + cost(last, n + 1);
}

inline std::vector<std::size_t> mask_indices(std::uint32_t mask) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1U) s.push_back(i);
  return s;
}

/// Tie order: fewer points, then lexicographically smaller sorted index list.
inline bool mask_precedes(std::uint32_t a, std::uint32_t b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  const std::uint32_t diff = a ^ b;
  return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

inline void check_brute_size(std::size_t n, const char* who) {
  if (n > kMaxBruteForce) throw std::length_error(std::string(who) + ": more than 25 positions");
}

}  // namespace detail

/// Exact maximizer by enumeration of all 2^n subsets.
inline VarSolution solve_bruteforce(const EnergyLandscape& L) {
  L.validate();
  const std::size_t n = L.size();
  detail::check_brute_size(n, "solve_bruteforce");
  detail::GapCostTable cost(L.positions, L.gamma, L.c_entropy);
  double best = -kInf;
  std::uint32_t best_mask = 0;
  const std::uint32_t total = n == 0 ? 1U : (1U << n);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) w += L.weights[i];
    const double v = L.beta * w - detail::subset_entropy(cost, mask, n);
    if (v > best || (v == best && detail::mask_precedes(mask, best_mask))) {
      best = v;
      best_mask = mask;
    }
  }
  VarSolution s;
  s.selected = detail::mask_indices(best_mask);
  s.maximizer = L.set_of(s.selected);
  s.value = best;
  return s;
}

/// O(n^2) dynamic program over positions augmented with both endpoints.
inline VarSolution solve_dp(const EnergyLandscape& L) {
  L.validate();
  std::vector<double> p(L.size() + 2);
  p.front() = 0.0;
  p.back() = 1.0;
  std::copy(L.positions.begin(), L.positions.end(), p.begin() + 1);
  const double g = L.gamma, c = L.c_entropy;
  auto r = detail::run_dp(L.weights, L.beta, [&](std::size_t i, std::size_t j) { return c * std::pow(p[j] - p[i], g); });
  VarSolution s;
  s.selected = std::move(r.selected);
  s.maximizer = L.set_of(s.selected);
  s.value = r.value;
  return s;
}

/// Max of the objective over sets at Hausdorff distance >= delta from
/// ref.maximizer; -inf when no subset qualifies.
inline double constrained_max(const EnergyLandscape& L, const VarSolution& ref, double delta) {
  L.validate();
  const std::size_t n = L.size();
  detail::check_brute_size(n, "constrained_max");
  detail::GapCostTable cost(L.positions, L.gamma, L.c_entropy);
  double best = -kInf;
  const std::uint32_t total = n == 0 ? 1U : (1U << n);
  std::vector<double> pts;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    pts.assign(1, 0.0);
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        pts.push_back(L.positions[i]);
        w += L.weights[i];
      }
    }
    pts.push_back(1.0);
    if (hausdorff(pts, ref.maximizer.points()) < delta) continue;
    best = std::max(best, L.beta * w - detail::subset_entropy(cost, mask, n));
  }
  return best;
}

/// inf{beta : maximizer != {0,1}} = min over nonempty A of c(E(Y_A) - 1) / w(A).
/// Enumeration up to 25 points; bisection on solve_dp beyond.
inline double beta_critical(std::span<const double> positions, std::span<const double> weights, double gamma,
                            double c_entropy = 1.0, bool force_bisection = false) {
  EnergyLandscape L = EnergyLandscape::from_unsorted(positions, weights, 0.0, gamma, c_entropy);
  const std::size_t n = L.size();
  if (n == 0) return kInf;
  detail::GapCostTable cost(L.positions, gamma, c_entropy);
  auto ratio = [&](std::span<const std::size_t> sel) {
    double w = 0.0;
    for (auto i : sel) w += L.weights[i];
    double e = 0.0;
    std::size_t last = 0;
    for (auto i : sel) {
      e += cost(last, i + 1);
      last = i + 1;
    }
    e += cost(last, n + 1);
    return (e - c_entropy) / w;
  };

  if (n <= kMaxBruteForce && !force_bisection) {
    double best = kInf;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) w += L.weights[i];
      best = std::min(best, (detail::subset_entropy(cost, mask, n) - c_entropy) / w);
    }
    return best;
  }

  // Bracket [0, 2 (E_max - 1) / w_max]; E_max = entropy of all positions.
  double e_max = 0.0;
  for (std::size_t j = 1; j < n + 2; ++j) e_max += cost(j - 1, j);
  const double w_max = *std::max_element(L.weights.begin(), L.weights.end());
  double lo = 0.0;
  double hi = 2.0 * (e_max - c_entropy) / w_max;
  double best = kInf;
  auto probe = [&](double beta) -> bool {
    auto r = detail::run_dp(L.weights, beta, cost);
    if (r.selected.empty()) return false;
    best = std::min(best, ratio(r.selected));
    return true;
  };
  constexpr double tol = 1e-9;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = std::min(mid, best);
    else
      lo = mid;
  }
  if (best == kInf) probe(hi);
  return best;
}

inline double beta_critical(const EnergyLandscape& L, bool force_bisection = false) {
  return beta_critical(L.positions, L.weights, L.gamma, L.c_entropy, force_bisection);
}

}  // namespace pinlab

#endif  // PINLAB_VARMAX_HPP
