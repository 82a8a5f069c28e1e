#pragma once

#include <cstdint>
#include <string_view>

namespace stargaze {

/// splitmix64: tiny deterministic generator used for everything seed-derived.
/// The standard-library distributions are implementation-defined, so all
/// sampling here is hand-rolled to keep results identical across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) via rejection sampling; bound must be > 0.
  std::uint64_t bounded(std::uint64_t bound) {
    const std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (polar form, deterministic draw order).
  double normal();

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Derives a named sub-seed so independent components (fold shuffles, cluster
/// restarts, ...) never share a stream even when the user passes one seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/// Deterministic Fisher-Yates shuffle of 0..n-1.
void shuffle_indices(std::uint64_t seed, std::size_t n, std::size_t* out);

} // namespace stargaze
