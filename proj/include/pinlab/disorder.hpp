#ifndef PINLAB_DISORDER_HPP
#define PINLAB_DISORDER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pinlab/rng.hpp"

namespace pinlab {

/// Pure Pareto disorder: P(omega > t) = (t / t_min)^{-alpha} for t >= t_min.
struct DisorderLaw {
  double alpha = 0.5;
  double t_min = 1.0;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("DisorderLaw: alpha must lie in (0,1)");
    if (!(t_min > 0.0) || !std::isfinite(t_min)) throw std::domain_error("DisorderLaw: t_min must be positive");
  }
};

inline double pareto_quantile(const DisorderLaw& law, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("pareto_quantile: p must lie in [0,1)");
  return law.t_min * std::pow(1.0 - p, -1.0 / law.alpha);
}

/// Solves P(omega > b_N) = 1/N.
inline double compute_b_N(const DisorderLaw& law, std::size_t N) {
  if (N < 1) throw std::domain_error("compute_b_N: N must be >= 1");
  return law.t_min * std::pow(static_cast<double>(N), 1.0 / law.alpha);
}

namespace detail {

/// Fenwick tree over occupancy flags supporting "r-th free slot" selection.
class FreeSlots {
 public:
  explicit FreeSlots(std::size_t n) : tree_(n + 1, 0), size_(n), free_(n) {
    for (std::size_t i = 1; i <= n; ++i) {
      tree_[i] += 1;
      const std::size_t j = i + (i & (~i + 1));
      if (j <= n) tree_[j] += tree_[i];
    }
    top_ = 1;
    while (top_ * 2 <= n) top_ *= 2;
  }

  [[nodiscard]] std::size_t free_count() const { return free_; }

  /// Removes and returns the 0-based slot holding the r-th (0-based) free position.
  std::size_t take(std::size_t r) {
    std::size_t pos = 0;
    std::size_t rem = r + 1;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      const std::size_t nxt = pos + step;
      if (nxt <= size_ && tree_[nxt] < rem) {
        pos = nxt;
        rem -= tree_[nxt];
      }
    }
    for (std::size_t i = pos + 1; i <= size_; i += i & (~i + 1)) tree_[i] -= 1;
    --free_;
    return pos;
  }

 private:
  std::vector<std::size_t> tree_;
  std::size_t size_;
  std::size_t free_;
  std::size_t top_ = 1;
};

}  // namespace detail

/// Continuum Poisson-limit disorder truncated to its first k atoms:
/// weights T_i^{-1/alpha} (strictly decreasing) at i.i.d. uniform positions.
struct ContinuumDisorder {
  double alpha = 0.5;
  std::vector<double> T;
  std::vector<double> M;
  std::vector<double> Y;

  [[nodiscard]] std::size_t size() const { return M.size(); }
};

/// Discrete order statistics of N-1 Pareto variables coupled with their
/// continuum limit. Immutable once built.
class CoupledDisorder {
 public:
  [[nodiscard]] std::size_t N() const { return N_; }
  [[nodiscard]] std::size_t k() const { return k_; }
  [[nodiscard]] double b_N() const { return b_N_; }
  [[nodiscard]] const DisorderLaw& law() const { return law_; }

  /// Cumulative sums of unit exponentials; length is the buffer size.
  [[nodiscard]] std::span<const double> T() const { return T_; }
  [[nodiscard]] std::span<const double> M_inf() const { return M_inf_; }
  [[nodiscard]] std::span<const double> Y_inf() const { return Y_inf_; }
  /// Rescaled discrete maxima M_i^{(N)}, i = 1..N-1 (0-based storage).
  [[nodiscard]] std::span<const double> M_disc() const { return M_disc_; }
  /// Grid indices n in {1..N-1}; the rank-i maximum sits at n/N.
  [[nodiscard]] std::span<const std::size_t> Y_disc_index() const { return Y_index_; }
  [[nodiscard]] double Y_disc(std::size_t i) const {
    return static_cast<double>(Y_index_[i]) / static_cast<double>(N_);
  }

  /// Raw disorder omega_1..omega_{N-1} on the lattice, i.e. b_N * M placed at its site.
  [[nodiscard]] std::vector<double> omega() const {
    std::vector<double> w(N_ - 1, 0.0);
    for (std::size_t i = 0; i + 1 < N_; ++i) w[Y_index_[i] - 1] = b_N_ * M_disc_[i];
    return w;
  }

  /// First `k` continuum atoms (k is clamped to the buffer).
  [[nodiscard]] ContinuumDisorder continuum(std::size_t k) const {
    const std::size_t m = std::min(k, M_inf_.size());
    ContinuumDisorder c;
    c.alpha = law_.alpha;
    c.T.assign(T_.begin(), T_.begin() + static_cast<std::ptrdiff_t>(m));
    c.M.assign(M_inf_.begin(), M_inf_.begin() + static_cast<std::ptrdiff_t>(m));
    c.Y.assign(Y_inf_.begin(), Y_inf_.begin() + static_cast<std::ptrdiff_t>(m));
    return c;
  }

  friend CoupledDisorder sample_coupled(const DisorderLaw&, std::size_t, std::size_t, Stream&);

 private:
  DisorderLaw law_;
  std::size_t N_ = 0;
  std::size_t k_ = 0;
  double b_N_ = 1.0;
  std::vector<double> T_;
  std::vector<double> M_inf_;
  std::vector<double> Y_inf_;
  std::vector<double> M_disc_;
  std::vector<std::size_t> Y_index_;
};

inline constexpr std::size_t kMinDisorderBuffer = 4096;

namespace detail {

inline void fill_continuum(double alpha, std::size_t n, Stream exp_stream, Stream pos_stream,
                           std::vector<double>& T, std::vector<double>& M, std::vector<double>& Y) {
  T.resize(n);
  M.resize(n);
  Y.resize(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += exp_stream.exponential();
    T[i] = acc;
    M[i] = std::pow(acc, -1.0 / alpha);
  }
  for (std::size_t i = 0; i < n; ++i) Y[i] = pos_stream.uniform();
}

}  // namespace detail

/// Continuum disorder only. On the same stream state this reproduces the
/// continuum part of sample_coupled exactly (shared prefix).
inline ContinuumDisorder sample_continuum(const DisorderLaw& law, std::size_t k, Stream& rng) {
  law.validate();
  Stream exp_stream = rng.split();
  Stream pos_stream = rng.split();
  ContinuumDisorder c;
  c.alpha = law.alpha;
  detail::fill_continuum(law.alpha, k, exp_stream, pos_stream, c.T, c.M, c.Y);
  return c;
}

/// Builds the coupling from one stream. M_disc uses the representation
/// (T_i / T_N)_{i<N} ~ ordered uniforms; rank i takes the
/// floor(Y_inf[i] * #free)-th free interior grid slot, which makes Y_disc an
/// exactly uniform permutation with |Y_disc[i] - Y_inf[i]| <= (i+1)/N.
inline CoupledDisorder sample_coupled(const DisorderLaw& law, std::size_t N, std::size_t k, Stream& rng) {
  law.validate();
  if (N < 2) throw std::domain_error("sample_coupled: N must be >= 2");
  if (k < 1) throw std::domain_error("sample_coupled: k must be >= 1");
  CoupledDisorder d;
  d.law_ = law;
  d.N_ = N;
  d.k_ = k;
  d.b_N_ = compute_b_N(law, N);
  Stream exp_stream = rng.split();
  Stream pos_stream = rng.split();
  const std::size_t buffer = std::max({N, k, kMinDisorderBuffer});
  detail::fill_continuum(law.alpha, buffer, exp_stream, pos_stream, d.T_, d.M_inf_, d.Y_inf_);

  const double T_N = d.T_[N - 1];
  d.M_disc_.resize(N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double v = pareto_quantile(law, 1.0 - d.T_[i] / T_N);
    d.M_disc_[i] = v / d.b_N_;
  }

  detail::FreeSlots slots(N - 1);
  d.Y_index_.resize(N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const auto free = static_cast<double>(slots.free_count());
    auto r = static_cast<std::size_t>(d.Y_inf_[i] * free);
    r = std::min(r, slots.free_count() - 1);
    d.Y_index_[i] = slots.take(r) + 1;
  }
  return d;
}

/// rho^{(k)} = sum_{i>k} M_i: the energy any set can lose by k-truncation.
inline double truncation_residual(std::span<const double> M, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = M.size(); i > k; --i) s += M[i - 1];  // small terms first
  return s;
}

inline double truncation_residual(const CoupledDisorder& d, std::size_t k) {
  return truncation_residual(d.M_disc(), k);
}

/// Continuum residual over the stored atoms plus an analytic bound on the
/// atoms beyond the buffer, sum_{i>B} T_i^{-1/a} ~ a/(1-a) T_B^{1-1/a}.
struct ContinuumResidual {
  double value = 0.0;
  double tail_bound = 0.0;
};

inline ContinuumResidual continuum_residual(std::span<const double> M, std::span<const double> T,
                                            double alpha, std::size_t k) {
  ContinuumResidual r;
  r.value = truncation_residual(M, k);
  if (!T.empty()) r.tail_bound = alpha / (1.0 - alpha) * std::pow(T.back(), 1.0 - 1.0 / alpha);
  return r;
}

inline ContinuumResidual continuum_residual(const CoupledDisorder& d, std::size_t k) {
  return continuum_residual(d.M_inf(), d.T(), d.law().alpha, k);
}

}  // namespace pinlab

#endif  // PINLAB_DISORDER_HPP
