#ifndef PINLAB_POLYMER_HPP
#define PINLAB_POLYMER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinlab/geometry.hpp"
#include "pinlab/rng.hpp"
#include "pinlab/subordinator.hpp"

namespace pinlab {

inline constexpr double kPolymerTolerance = 1e-12;

struct Charge {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
};

inline bool in_diamond(double x, double y, double tol = kPolymerTolerance) {
  return x >= -tol && x <= 1.0 + tol && std::abs(y) <= std::min(x, 1.0 - x) + tol;
}

/// Continuum heavy-tailed environment: weights T_i^{-1/alpha} at i.i.d.
/// uniform points of D. Charges are kept in generation (decreasing weight) order.
struct PolymerEnvironment {
  std::vector<Charge> charges;
  double alpha = 0.5;
  std::size_t k = 0;

  void validate() const {
    for (const auto& c : charges) {
      if (!in_diamond(c.x, c.y)) throw std::invalid_argument("PolymerEnvironment: charge outside the diamond D");
      if (!(c.w > 0.0)) throw std::invalid_argument("PolymerEnvironment: weights must be positive");
    }
  }

  [[nodiscard]] MarkedPointSet marked() const {
    MarkedPointSet s;
    for (const auto& c : charges) {
      s.marks.push_back(c.w);
      s.x.push_back(c.x);
      s.y.push_back(c.y);
    }
    return s;
  }
};

inline PolymerEnvironment sample_environment(double alpha, std::size_t k, Stream& rng) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("sample_environment: alpha must lie in (0,2)");
  Stream exp_stream = rng.split();
  Stream pos_stream = rng.split();
  PolymerEnvironment env;
  env.alpha = alpha;
  env.k = k;
  env.charges.resize(k);
  double T = 0.0;
  for (auto& c : env.charges) {
    T += exp_stream.exponential();
    c.w = std::pow(T, -1.0 / alpha);
  }
  // D is the unit square rotated by 45 degrees and scaled: (u,v) -> ((u+v)/2, (u-v)/2).
  for (auto& c : env.charges) {
    const double u = pos_stream.uniform();
    const double v = pos_stream.uniform();
    c.x = 0.5 * (u + v);
    c.y = 0.5 * (u - v);
  }
  return env;
}

/// e(x) = ((1+x)log(1+x) + (1-x)log(1-x)) / 2 with 0 log 0 = 0.
inline double binary_entropy_rate(double x) {
  if (!(std::abs(x) <= 1.0)) throw std::domain_error("binary_entropy_rate: |slope| > 1");
  auto xlogx = [](double v) { return v > 0.0 ? v * std::log(v) : 0.0; };
  return 0.5 * (xlogx(1.0 + x) + xlogx(1.0 - x));
}

/// Piecewise-linear 1-Lipschitz path from (0,0) to (1,0).
class PolymerPath {
 public:
  struct Vertex {
    double x;
    double y;
  };

  PolymerPath() : vertices_{{0.0, 0.0}, {1.0, 0.0}} {}
  explicit PolymerPath(std::vector<Vertex> v) : vertices_(std::move(v)) { validate(); }

  /// Endpoints plus the given interior vertices (must already be x-sorted).
  static PolymerPath through(std::span<const Vertex> interior) {
    std::vector<Vertex> v;
    v.reserve(interior.size() + 2);
    v.push_back({0.0, 0.0});
    v.insert(v.end(), interior.begin(), interior.end());
    v.push_back({1.0, 0.0});
    return PolymerPath(std::move(v));
  }

  [[nodiscard]] std::span<const Vertex> vertices() const { return vertices_; }
  [[nodiscard]] bool flat() const {
    return std::all_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.y == 0.0; });
  }

  /// Height of the path at abscissa x in [0,1].
  [[nodiscard]] double at(double x) const {
    auto it = std::upper_bound(vertices_.begin(), vertices_.end(), x, [](double a, const Vertex& v) { return a < v.x; });
    if (it == vertices_.begin()) return vertices_.front().y;
    if (it == vertices_.end()) return vertices_.back().y;
    const Vertex& b = *it;
    const Vertex& a = *(it - 1);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
  }

 private:
  void validate() const {
    if (vertices_.size() < 2) throw std::invalid_argument("PolymerPath: needs both endpoints");
    const auto& f = vertices_.front();
    const auto& l = vertices_.back();
    if (f.x != 0.0 || f.y != 0.0 || l.x != 1.0 || l.y != 0.0)
      throw std::invalid_argument("PolymerPath: must run from (0,0) to (1,0)");
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
      const double dx = vertices_[i].x - vertices_[i - 1].x;
      const double dy = vertices_[i].y - vertices_[i - 1].y;
      if (!(dx > kPolymerTolerance)) throw std::invalid_argument("PolymerPath: zero-length or backward segment");
      if (std::abs(dy) > dx + kPolymerTolerance) throw std::invalid_argument("PolymerPath: segment is not 1-Lipschitz");
    }
  }

  std::vector<Vertex> vertices_;
};

namespace detail {

/// dx * e(dy/dx), +inf when the segment violates the Lipschitz bound.
inline double segment_entropy(double dx, double dy) {
  if (!(dx > kPolymerTolerance) || std::abs(dy) > dx + kPolymerTolerance) return std::numeric_limits<double>::infinity();
  const double slope = std::clamp(dy / dx, -1.0, 1.0);
  return dx * binary_entropy_rate(slope);
}

}  // namespace detail

inline double path_entropy(const PolymerPath& p) {
  const auto v = p.vertices();
  double e = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) e += detail::segment_entropy(v[i].x - v[i - 1].x, v[i].y - v[i - 1].y);
  return e;
}

/// Sum of weights of charges on graph(p) (within 1e-12 vertically).
inline double env_energy(const PolymerEnvironment& env, const PolymerPath& p) {
  double e = 0.0;
  for (const auto& c : env.charges)
    if (std::abs(p.at(c.x) - c.y) <= kPolymerTolerance) e += c.w;
  return e;
}

struct PolymerSolution {
  PolymerPath path;
  double value = 0.0;                 // u_beta
  std::vector<std::size_t> selected;  // env.charges indices, in path order
};

namespace detail {

/// Charges sorted by x with the two endpoints as nodes 0 and n+1.
struct PolymerGraph {
  std::vector<std::size_t> order;  // sorted slot -> charge index
  std::vector<double> x, y, w;
  std::vector<double> cost;  // (n+2)^2, cost[j*(n+2)+i] for i<j; empty = on the fly

  explicit PolymerGraph(const PolymerEnvironment& env, bool tabulate) {
    const std::size_t n = env.charges.size();
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return env.charges[a].x < env.charges[b].x; });
    x.push_back(0.0);
    y.push_back(0.0);
    w.push_back(0.0);
    for (auto i : order) {
      x.push_back(env.charges[i].x);
      y.push_back(env.charges[i].y);
      w.push_back(env.charges[i].w);
    }
    x.push_back(1.0);
    y.push_back(0.0);
    w.push_back(0.0);
    if (tabulate) {
      const std::size_t m = n + 2;
      cost.assign(m * m, std::numeric_limits<double>::infinity());
      for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = 0; i < j; ++i) cost[j * m + i] = segment_entropy(x[j] - x[i], y[j] - y[i]);
    }
  }

  [[nodiscard]] std::size_t nodes() const { return x.size(); }
  [[nodiscard]] double edge(std::size_t i, std::size_t j) const {
    return cost.empty() ? segment_entropy(x[j] - x[i], y[j] - y[i]) : cost[j * nodes() + i];
  }
};

struct PolymerDp {
  double value;
  std::vector<std::size_t> slots;  // sorted slots 1..n on the optimal path
};

inline PolymerDp polymer_dp(const PolymerGraph& g, double beta) {
  const std::size_t m = g.nodes();
  std::vector<double> best(m, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> count(m, 0), prev(m, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    double b = -std::numeric_limits<double>::infinity();
    std::size_t bc = 0, bp = 0;
    for (std::size_t i = 0; i < j; ++i) {
      if (best[i] == -std::numeric_limits<double>::infinity()) continue;
      const double c = g.edge(i, j);
      if (c == std::numeric_limits<double>::infinity()) continue;
      const double cand = best[i] - c;
      if (cand > b || (cand == b && count[i] < bc)) {
        b = cand;
        bc = count[i];
        bp = i;
      }
    }
    const bool interior = j + 1 < m;
    best[j] = b + (interior ? beta * g.w[j] : 0.0);
    count[j] = bc + (interior ? 1 : 0);
    prev[j] = bp;
  }
  PolymerDp r;
  r.value = best[m - 1];
  for (std::size_t j = prev[m - 1]; j != 0; j = prev[j]) r.slots.push_back(j);
  std::reverse(r.slots.begin(), r.slots.end());
  return r;
}

}  // namespace detail

/// Ground state over paths with vertices at charges: DP over x-sorted charges
/// with Lipschitz-compatible edges. Ties prefer fewer vertices.
inline PolymerSolution solve_polymer(const PolymerEnvironment& env, double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("solve_polymer: beta must be >= 0");
  env.validate();
  detail::PolymerGraph g(env, false);
  auto r = detail::polymer_dp(g, beta);
  PolymerSolution s;
  std::vector<PolymerPath::Vertex> verts;
  for (auto slot : r.slots) {
    verts.push_back({g.x[slot], g.y[slot]});
    s.selected.push_back(g.order[slot - 1]);
  }
  s.path = PolymerPath::through(verts);
  s.value = std::max(0.0, r.value);
  return s;
}

inline constexpr std::size_t kMaxPolymerEnumeration = 20;

/// beta_c = inf{beta : u_beta > 0} = min over feasible vertex sets P of
/// E(gamma_P) / w(P). Enumeration up to 20 charges, bisection beyond.
inline double polymer_beta_critical(const PolymerEnvironment& env, bool force_bisection = false) {
  env.validate();
  if (env.charges.empty()) return kInf;
  for (const auto& c : env.charges)
    if (std::abs(c.y) <= kPolymerTolerance) return 0.0;
  const std::size_t n = env.charges.size();

  if (n <= kMaxPolymerEnumeration && !force_bisection) {
    detail::PolymerGraph g(env, true);
    double best = kInf;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      double e = 0.0, w = 0.0;
      std::size_t last = 0;
      for (std::size_t i = 0; i < n && e < kInf; ++i) {
        if (mask >> i & 1U) {
          e += g.edge(last, i + 1);
          w += g.w[i + 1];
          last = i + 1;
        }
      }
      e += g.edge(last, n + 1);
      if (e < kInf) best = std::min(best, e / w);
    }
    return best;
  }

  detail::PolymerGraph g(env, true);
  auto ratio = [&](std::span<const std::size_t> slots) {
    double e = 0.0, w = 0.0;
    std::size_t last = 0;
    for (auto s : slots) {
      e += g.edge(last, s);
      w += g.w[s];
      last = s;
    }
    return (e + g.edge(last, n + 1)) / w;
  };
  // Every single charge is reachable by its tent path.
  double best = kInf;
  for (std::size_t s = 1; s <= n; ++s) best = std::min(best, (g.edge(0, s) + g.edge(s, n + 1)) / g.w[s]);
  double lo = 0.0, hi = best;
  constexpr double tol = 1e-9;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    auto r = detail::polymer_dp(g, mid);
    if (!r.slots.empty() && r.value > 0.0) {
      best = std::min(best, ratio(r.slots));
      hi = std::min(mid, best);
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace pinlab

#endif  // PINLAB_POLYMER_HPP
