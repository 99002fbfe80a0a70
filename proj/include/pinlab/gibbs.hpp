#ifndef PINLAB_GIBBS_HPP
#define PINLAB_GIBBS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinlab/geometry.hpp"
#include "pinlab/renewal.hpp"
#include "pinlab/rng.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

/// Pinning model on {0,...,N}: renewal prior, reward beta*omega_n - h at
/// interior sites, conditioned on N being a renewal.
struct PinningModel {
  RenewalLaw law;
  std::vector<double> omega;  // omega_1..omega_{N-1}
  double beta = 0.0;
  double h = 0.0;
  std::size_t N = 2;
  /// When set, only the k largest omega act; the rest are zeroed.
  std::optional<std::size_t> truncation;

  void validate() const {
    if (N < 2) throw std::domain_error("PinningModel: N must be >= 2");
    if (omega.size() != N - 1) throw std::invalid_argument("PinningModel: omega must have length N-1");
    for (double w : omega)
      if (!(w >= 0.0)) throw std::domain_error("PinningModel: omega must be non-negative");
    if (!(beta >= 0.0)) throw std::domain_error("PinningModel: beta must be >= 0");
    if (N > law.n_max()) throw std::domain_error("PinningModel: N exceeds the renewal law support");
  }

  /// beta*omega_n - h for n = 1..N-1 (index n-1), honouring the truncation.
  [[nodiscard]] std::vector<double> site_log_weights() const {
    std::vector<double> eff(omega);
    if (truncation && *truncation < eff.size()) {
      std::vector<double> sorted(eff);
      std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(*truncation), sorted.end(),
                       std::greater<>());
      // Keep the top-k by value; ties at the cut resolved by site order.
      const double cut = sorted[*truncation];
      std::size_t above = 0;
      for (double w : eff) above += w > cut ? 1 : 0;
      std::size_t at_cut_budget = *truncation - above;
      for (auto& w : eff) {
        if (w > cut) continue;
        if (w == cut && at_cut_budget > 0) {
          --at_cut_budget;
          continue;
        }
        w = 0.0;
      }
    }
    for (auto& w : eff) w = beta * w - h;
    return eff;
  }
};

/// Grid-aligned configuration: sorted renewal indices 0 = n_0 < ... < n_m = N.
struct GibbsSample {
  std::vector<std::size_t> indices;
  std::size_t N = 0;

  [[nodiscard]] PinnedSet set() const {
    std::vector<double> p(indices.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<double>(indices[i]) / static_cast<double>(N);
    return PinnedSet(std::move(p));
  }
};

namespace detail {

inline double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace detail

/// Forward tables log Z_0..log Z_N; built once, then read-only.
class PartitionTable {
 public:
  explicit PartitionTable(const PinningModel& model) : N_(model.N) {
    model.validate();
    site_ = model.site_log_weights();
    logK_.resize(N_ + 1);
    logK_[0] = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= N_; ++n) logK_[n] = model.law.log_K(n);
    logZ_.assign(N_ + 1, 0.0);
    std::vector<double> terms;
    terms.reserve(N_);
    for (std::size_t n = 1; n <= N_; ++n) {
      terms.clear();
      for (std::size_t m = 0; m < n; ++m) terms.push_back(logZ_[m] + logK_[n - m]);
      logZ_[n] = detail::log_sum_exp(terms) + (n < N_ ? site_[n - 1] : 0.0);
    }
  }

  [[nodiscard]] std::size_t N() const { return N_; }
  [[nodiscard]] double log_partition() const { return logZ_[N_]; }
  [[nodiscard]] std::span<const double> log_Z() const { return logZ_; }
  [[nodiscard]] double log_K(std::size_t n) const { return logK_[n]; }
  [[nodiscard]] double site_log_weight(std::size_t n) const { return site_[n - 1]; }

  /// Backward draw: from n pick the previous renewal m with probability
  /// Z_m K(n-m) w_n / Z_n.
  [[nodiscard]] GibbsSample sample(Stream& rng) const {
    GibbsSample s;
    s.N = N_;
    std::size_t n = N_;
    s.indices.push_back(n);
    while (n > 0) {
      const double target = logZ_[n] - (n < N_ ? site_[n - 1] : 0.0);
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t pick = n - 1;
      // Scan from the nearest predecessor; the probabilities sum to one.
      for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t m = n - step;
        acc += std::exp(logZ_[m] + logK_[step] - target);
        if (u < acc) {
          pick = m;
          break;
        }
        if (m == 0) pick = 0;
      }
      n = pick;
      s.indices.push_back(n);
    }
    std::reverse(s.indices.begin(), s.indices.end());
    return s;
  }

  /// log of prod K(gaps) * prod_{interior} e^{beta omega_n - h}.
  [[nodiscard]] double set_log_weight(const GibbsSample& I) const {
    if (I.indices.size() < 2 || I.indices.front() != 0 || I.indices.back() != N_)
      throw std::invalid_argument("set_log_weight: configuration must contain 0 and N");
    double w = 0.0;
    for (std::size_t i = 1; i < I.indices.size(); ++i) {
      if (I.indices[i] <= I.indices[i - 1]) throw std::invalid_argument("set_log_weight: indices must increase");
      const std::size_t gap = I.indices[i] - I.indices[i - 1];
      w += logK_[gap];
      if (i + 1 < I.indices.size()) w += site_[I.indices[i] - 1];
    }
    return w;
  }

 private:
  std::size_t N_;
  std::vector<double> site_;
  std::vector<double> logK_;
  std::vector<double> logZ_;
};

inline double log_partition(const PinningModel& model) { return PartitionTable(model).log_partition(); }

inline GibbsSample exact_sample(const PartitionTable& table, Stream& rng) { return table.sample(rng); }

inline double set_log_weight(const PartitionTable& table, const GibbsSample& I) { return table.set_log_weight(I); }

/// Monte Carlo estimate of P(d_H(I, ref) > delta) with a 95% Wilson interval.
inline stats::Proportion concentration_probability(const PartitionTable& table, const PinnedSet& ref, double delta,
                                                   std::size_t n_samples, Stream& rng) {
  if (n_samples < 1) throw std::invalid_argument("concentration_probability: n_samples must be >= 1");
  std::size_t hits = 0;
  std::vector<double> pts;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto draw = table.sample(rng);
    pts.resize(draw.indices.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      pts[i] = static_cast<double>(draw.indices[i]) / static_cast<double>(draw.N);
    if (hausdorff(pts, ref.points()) > delta) ++hits;
  }
  return stats::wilson(hits, n_samples);
}

}  // namespace pinlab

#endif  // PINLAB_GIBBS_HPP
