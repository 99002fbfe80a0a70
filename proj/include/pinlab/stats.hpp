#ifndef PINLAB_STATS_HPP
#define PINLAB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace pinlab::stats {

/// Binomial proportion with a Wilson score interval.
struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

inline Proportion wilson(std::size_t hits, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) throw std::invalid_argument("wilson: zero trials");
  Proportion p;
  p.hits = hits;
  p.trials = trials;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  p.estimate = phat;
  p.lower = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  p.upper = hits == trials ? 1.0 : std::min(1.0, centre + half);
  return p;
}

/// Linear interpolation quantile (type 7) of an unsorted sample.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Standard error of the mean.
inline double std_error(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1) / n);
}

/// Weighted least-squares fit y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::size_t points = 0;

  /// Two-sided confidence interval for the slope from the t distribution.
  [[nodiscard]] std::pair<double, double> slope_interval(double level = 0.95) const {
    if (points <= 2) return {-INFINITY, INFINITY};
    boost::math::students_t dist(static_cast<double>(points - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, (1 - level) / 2));
    return {slope - t * slope_se, slope + t * slope_se};
  }
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                          std::span<const double> w = {}) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 paired points");
  const std::size_t n = x.size();
  auto weight = [&](std::size_t i) { return w.empty() ? 1.0 : w[i]; };
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += weight(i);
    sx += weight(i) * x[i];
    sy += weight(i) * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += weight(i) * (x[i] - mx) * (x[i] - mx);
    sxy += weight(i) * (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.points = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += weight(i) * r * r;
    }
    f.slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

/// Two-sample-free Kolmogorov-Smirnov distance of a sample against a CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pinlab::stats

#endif  // PINLAB_STATS_HPP
