#ifndef PINLAB_SUBORDINATOR_HPP
#define PINLAB_SUBORDINATOR_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinlab/disorder.hpp"

namespace pinlab {

/// Positive marks at locations in [0,1] (pinning) or in the diamond
/// D = {|y| <= min(x, 1-x)} (polymer; y is then stored alongside x).
struct MarkedPointSet {
  std::vector<double> marks;
  std::vector<double> x;
  std::vector<double> y;  // empty for the pinning case
  /// Bound on the mass of atoms dropped by truncation.
  double residual = 0.0;

  [[nodiscard]] std::size_t size() const { return marks.size(); }
  [[nodiscard]] bool planar() const { return !y.empty(); }

  static MarkedPointSet from_continuum(const ContinuumDisorder& d) {
    MarkedPointSet s;
    s.marks = d.M;
    s.x = d.Y;
    if (!d.T.empty() && d.alpha < 1.0) s.residual = continuum_residual(d.M, d.T, d.alpha, d.M.size()).tail_bound;
    return s;
  }
};

/// X_t: total mark in [0,t] u [1-t,1].
inline double edge_process(const MarkedPointSet& s, double t) {
  if (!(t >= 0.0 && t <= 0.5)) throw std::domain_error("edge_process: t must lie in [0,1/2]");
  double x = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.x[i] <= t || s.x[i] >= 1.0 - t) x += s.marks[i];
  return x;
}

/// t^{1/alpha} log^{q/alpha}(1/t).
inline double growth_envelope(double t, double alpha, double q) {
  return std::pow(t, 1.0 / alpha) * std::pow(std::log(1.0 / t), q / alpha);
}

/// sup over the grid (augmented with the jump times inside its range) of
/// X_t / envelope(t). Between jumps X is flat and the envelope increases, so
/// the supremum over the covered range sits on these points.
inline double growth_check(const MarkedPointSet& s, double alpha, double q, std::span<const double> t_grid) {
  if (!(q > 1.0)) throw std::domain_error("growth_check: q must be > 1");
  if (t_grid.empty()) throw std::domain_error("growth_check: empty grid");
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 0.1)) throw std::domain_error("growth_check: grid must lie in (0, 0.1]");
  const auto [lo_it, hi_it] = std::minmax_element(t_grid.begin(), t_grid.end());
  const double lo = *lo_it, hi = *hi_it;

  std::vector<double> ts(t_grid.begin(), t_grid.end());
  // (distance to the nearest edge, mark) sorted by distance
  std::vector<std::pair<double, double>> jumps;
  jumps.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = std::min(s.x[i], 1.0 - s.x[i]);
    jumps.emplace_back(d, s.marks[i]);
    if (d >= lo && d <= hi) ts.push_back(d);
  }
  std::sort(jumps.begin(), jumps.end());
  std::sort(ts.begin(), ts.end());
  double sup = 0.0, acc = 0.0;
  std::size_t j = 0;
  for (double t : ts) {
    while (j < jumps.size() && jumps[j].first <= t) acc += jumps[j++].second;
    sup = std::max(sup, acc / growth_envelope(t, alpha, q));
  }
  return sup;
}

/// phi(t) = (1 - sqrt(1 - 4t)) / 2, the time change giving U homogeneous increments.
inline double band_area_phi(double t) {
  if (!(t >= 0.0 && t <= 0.25)) throw std::domain_error("band_area_phi: t must lie in [0,1/4]");
  return 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * t));
}

struct BandValue {
  double U = 0.0;
  double W = 0.0;
};

/// U_t sums marks with |y| <= t; W_t = U_{phi(t)} (W only defined for t <= 1/4).
inline double band_U(const MarkedPointSet& env, double t) {
  if (!(t >= 0.0 && t <= 0.5)) throw std::domain_error("band_U: t must lie in [0,1/2]");
  if (!env.planar()) throw std::invalid_argument("band_U: needs planar locations");
  double u = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i)
    if (std::abs(env.y[i]) <= t) u += env.marks[i];
  return u;
}

inline BandValue band_process(const MarkedPointSet& env, double t) {
  BandValue v;
  v.U = band_U(env, t);
  v.W = t <= 0.25 ? band_U(env, band_area_phi(t)) : NAN;
  return v;
}

}  // namespace pinlab

#endif  // PINLAB_SUBORDINATOR_HPP
