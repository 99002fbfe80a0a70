#ifndef PINLAB_RENEWAL_HPP
#define PINLAB_RENEWAL_HPP

#include <cmath>
#include <cstdio>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "pinlab/stats.hpp"

namespace pinlab {

/// Inter-arrival law K(n) = C n^rho exp(-c n^gamma) on 1..n_max, scaled by
/// e^{-h} after tilting, with the missing mass placed at infinity. The support
/// is capped where the profile would leave the normal double range.
class RenewalLaw {
 public:
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double rho() const { return rho_; }
  [[nodiscard]] std::size_t n_max() const { return K_.size(); }
  [[nodiscard]] double K_inf() const { return K_inf_; }
  /// Analytic bound on sum_{n > n_max} of the untilted profile.
  [[nodiscard]] double tail_mass() const { return tail_mass_; }

  /// K(n) for 1 <= n <= n_max; zero beyond the support.
  [[nodiscard]] double K(std::size_t n) const { return n >= 1 && n <= K_.size() ? K_[n - 1] : 0.0; }
  /// log K(n), evaluated from the closed form so it never underflows.
  [[nodiscard]] double log_K(std::size_t n) const {
    if (n < 1 || n > K_.size()) return -INFINITY;
    const double x = static_cast<double>(n);
    return log_C_ + rho_ * std::log(x) - c_ * std::pow(x, gamma_);
  }
  [[nodiscard]] std::span<const double> table() const { return K_; }
  /// q(n) = K(n) / (1 - K_inf).
  [[nodiscard]] double q(std::size_t n) const { return K(n) / (1.0 - K_inf_); }

  friend RenewalLaw build_law(double, double, double, double, std::size_t);
  friend RenewalLaw tilt(const RenewalLaw&, double);

 private:
  double gamma_ = 0.5;
  double c_ = 1.0;
  double rho_ = 0.0;
  double log_C_ = 0.0;
  double K_inf_ = 0.0;
  double tail_mass_ = 0.0;
  std::vector<double> K_;
};

inline constexpr std::size_t kDefaultRenewalSupport = 100000;
inline constexpr double kLogProfileFloor = -700.0;

inline RenewalLaw build_law(double gamma, double c, double rho, double K_inf_target,
                            std::size_t n_max = kDefaultRenewalSupport) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("build_law: gamma must lie in (0,1)");
  if (!(c > 0.0)) throw std::domain_error("build_law: c must be > 0");
  if (!(K_inf_target >= 0.0 && K_inf_target < 1.0)) throw std::domain_error("build_law: K_inf must lie in [0,1)");
  if (n_max < 10) throw std::domain_error("build_law: n_max must be >= 10");
  RenewalLaw law;
  law.gamma_ = gamma;
  law.c_ = c;
  law.rho_ = rho;
  law.K_inf_ = K_inf_target;
  // Cap the support where the unnormalized profile leaves the normal double range.
  auto representable = [&](std::size_t n) {
    const double x = static_cast<double>(n);
    return rho * std::log(x) - c * std::pow(x, gamma) >= kLogProfileFloor;
  };
  if (!representable(n_max)) {
    std::size_t lo = 10, hi = n_max;  // representable(lo), !representable(hi)
    if (!representable(lo)) throw std::domain_error("build_law: K underflows already at n = 10");
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (representable(mid) ? lo : hi) = mid;
    }
    n_max = lo;
  }
  std::vector<double> profile(n_max);
  stats::CompensatedSum total;
  for (std::size_t n = n_max; n >= 1; --n) {
    const double x = static_cast<double>(n);
    profile[n - 1] = std::exp(rho * std::log(x) - c * std::pow(x, gamma));
    total.add(profile[n - 1]);
  }
  // sum_{m > n_max} m^rho e^{-c m^gamma} <= int_{n_max}^inf = c^{-(rho+1)/gamma}/gamma * Gamma((rho+1)/gamma, c n_max^gamma)
  const double a = (rho + 1.0) / gamma;
  const double x0 = c * std::pow(static_cast<double>(n_max), gamma);
  // For rho <= -1 bound m^rho by n_max^rho and integrate e^{-c m^gamma} alone.
  const double tail = a > 0 ? std::pow(c, -a) / gamma * boost::math::tgamma(a, x0)
                            : std::pow(static_cast<double>(n_max), rho) * std::pow(c, -1.0 / gamma) / gamma *
                                  boost::math::tgamma(1.0 / gamma, x0);
  const double mass = total.value();
  const double relative_tail = tail / mass;
  if (!(relative_tail <= 1e-10)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", relative_tail);
    throw std::domain_error(std::string("build_law: n_max too small, tail mass beyond support is ") + buf +
                            " of the total (limit 1e-10)");
  }
  const double scale = (1.0 - K_inf_target) / mass;
  law.log_C_ = std::log(scale);
  law.tail_mass_ = tail * scale;
  for (auto& v : profile) v *= scale;
  law.K_ = std::move(profile);
  return law;
}

/// Multiplies every K(n) by e^{-h} and moves the freed mass to infinity.
inline RenewalLaw tilt(const RenewalLaw& law, double h) {
  const double factor = std::exp(-h);
  if (factor * (1.0 - law.K_inf_) > 1.0 + 1e-12) throw std::domain_error("tilt: total mass would exceed 1");
  RenewalLaw t = law;
  t.log_C_ -= h;
  t.K_inf_ = std::max(0.0, 1.0 - factor * (1.0 - law.K_inf_));
  t.tail_mass_ *= factor;
  for (auto& v : t.K_) v *= factor;
  return t;
}

/// u(0..n) with u(0) = 1 and u(m) = sum_{j=1}^m K(j) u(m-j).
inline std::vector<double> renewal_function(const RenewalLaw& law, std::size_t n) {
  if (n > law.n_max()) throw std::domain_error("renewal_function: horizon beyond law support");
  std::vector<double> u(n + 1, 0.0);
  u[0] = 1.0;
  const auto K = law.table();
  for (std::size_t m = 1; m <= n; ++m) {
    stats::CompensatedSum s;
    for (std::size_t j = 1; j <= m; ++j) s.add(K[j - 1] * u[m - j]);
    u[m] = s.value();
  }
  return u;
}

/// Self-convolution tables of q = K / (1 - K_inf): q^{*2} and q^{*3} on 0..n.
struct ConvolutionPowers {
  std::vector<double> q1;
  std::vector<double> q2;
  std::vector<double> q3;
};

inline ConvolutionPowers convolution_powers(const RenewalLaw& law, std::size_t n) {
  if (n > law.n_max()) throw std::domain_error("convolution_powers: horizon beyond law support");
  ConvolutionPowers p;
  p.q1.assign(n + 1, 0.0);
  for (std::size_t m = 1; m <= n; ++m) p.q1[m] = law.q(m);
  auto convolve = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t m = 0; m <= n; ++m) {
      stats::CompensatedSum s;
      for (std::size_t j = 0; j <= m; ++j) s.add(a[j] * b[m - j]);
      out[m] = s.value();
    }
    return out;
  };
  p.q2 = convolve(p.q1, p.q1);
  p.q3 = convolve(p.q2, p.q1);
  return p;
}

struct SubexpDiagnostics {
  std::size_t n = 0;
  std::size_t k_shift = 0;
  double shift_ratio = 0.0;  // q(n+k)/q(n)
  double q2_ratio = 0.0;     // q*2(n)/q(n)
  double q3_ratio = 0.0;     // q*3(n)/q(n)
  double u_over_K = 0.0;     // u(n)/K(n)
  double K = 0.0;
  double u = 0.0;
};

inline SubexpDiagnostics subexp_diagnostics(const RenewalLaw& law, std::size_t n, std::size_t k_shift) {
  if (n + k_shift > law.n_max()) throw std::domain_error("subexp_diagnostics: n + k beyond law support");
  const auto conv = convolution_powers(law, n);
  const auto u = renewal_function(law, n);
  SubexpDiagnostics d;
  d.n = n;
  d.k_shift = k_shift;
  d.shift_ratio = std::exp(law.log_K(n + k_shift) - law.log_K(n));
  d.q2_ratio = conv.q2[n] / conv.q1[n];
  d.q3_ratio = conv.q3[n] / conv.q1[n];
  d.K = law.K(n);
  d.u = u[n];
  d.u_over_K = u[n] / law.K(n);
  return d;
}

}  // namespace pinlab

#endif  // PINLAB_RENEWAL_HPP
