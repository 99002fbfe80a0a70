#ifndef PINLAB_GEOMETRY_HPP
#define PINLAB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinlab {

inline constexpr double kPointTolerance = 1e-12;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite closed subset of [0,1] containing both endpoints, stored sorted.
class PinnedSet {
 public:
  PinnedSet() : points_{0.0, 1.0} {}
  PinnedSet(std::initializer_list<double> pts) : PinnedSet(std::vector<double>(pts)) {}
  explicit PinnedSet(std::vector<double> pts) : points_(std::move(pts)) { validate(); }

  /// {0} u interior u {1}; the interior is sorted here.
  static PinnedSet from_interior(std::vector<double> interior) {
    std::sort(interior.begin(), interior.end());
    interior.insert(interior.begin(), 0.0);
    interior.push_back(1.0);
    return PinnedSet(std::move(interior));
  }

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] std::span<const double> interior() const {
    return std::span<const double>(points_).subspan(1, points_.size() - 2);
  }
  [[nodiscard]] bool trivial() const { return points_.size() == 2; }

  [[nodiscard]] bool contains(double x, double tol = kPointTolerance) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x - tol);
    return it != points_.end() && *it <= x + tol;
  }

  /// I u {x}; x must be at distance > tolerance from every point.
  [[nodiscard]] PinnedSet with(double x) const {
    std::vector<double> p(points_);
    p.insert(std::upper_bound(p.begin(), p.end(), x), x);
    return PinnedSet(std::move(p));
  }

  /// {1 - x : x in I}.
  [[nodiscard]] PinnedSet reflected() const {
    std::vector<double> p(points_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1.0 - points_[points_.size() - 1 - i];
    p.front() = 0.0;
    p.back() = 1.0;
    return PinnedSet(std::move(p));
  }

  friend bool operator==(const PinnedSet&, const PinnedSet&) = default;

 private:
  void validate() const {
    if (points_.size() < 2) throw std::invalid_argument("PinnedSet: needs at least {0,1}");
    if (points_.front() != 0.0 || points_.back() != 1.0)
      throw std::invalid_argument("PinnedSet: must start at 0 and end at 1");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i] - points_[i - 1] > kPointTolerance))
        throw std::invalid_argument("PinnedSet: points must be strictly increasing (gap > 1e-12), got " +
                                    std::to_string(points_[i - 1]) + " then " + std::to_string(points_[i]));
    }
  }

  std::vector<double> points_;
};

inline void check_entropy_exponent(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("entropy exponent gamma must lie in (0,1)");
}

/// E(I) = sum of gap^gamma over consecutive points.
inline double set_entropy(const PinnedSet& I, double gamma) {
  check_entropy_exponent(gamma);
  const auto p = I.points();
  double e = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) e += std::pow(p[i] - p[i - 1], gamma);
  return e;
}

/// Hausdorff distance between two sorted finite sets, linear-time sweep.
inline double hausdorff(std::span<const double> a, std::span<const double> b) {
  auto directed = [](std::span<const double> from, std::span<const double> to) {
    double worst = 0.0;
    std::size_t j = 0;
    for (double x : from) {
      while (j + 1 < to.size() && to[j + 1] <= x) ++j;
      double d = std::abs(x - to[j]);
      if (j + 1 < to.size()) d = std::min(d, std::abs(to[j + 1] - x));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

inline double hausdorff(const PinnedSet& a, const PinnedSet& b) { return hausdorff(a.points(), b.points()); }

}  // namespace pinlab

#endif  // PINLAB_GEOMETRY_HPP
