#ifndef PINLAB_RNG_HPP
#define PINLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace pinlab {

/// splitmix64 finalizer, used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seeded random stream. The engine sequence is fixed by the standard and the
/// bit-to-double transforms are ours, so draws are identical on every platform.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Stream for replica `replica` of the experiment `tag` under `seed`.
  static Stream derive(std::uint64_t seed, std::string_view tag, std::uint64_t replica = 0) {
    return Stream(mix64(mix64(seed) ^ hash_tag(tag)) ^ mix64(replica + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0,1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

  /// Unit-mean exponential.
  double exponential() { return -std::log(uniform()); }

  /// Child stream whose seed is drawn from this one.
  Stream split() { return Stream(next_u64()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pinlab

#endif  // PINLAB_RNG_HPP
