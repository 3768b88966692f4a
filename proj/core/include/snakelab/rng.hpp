#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace snakelab {

/// splitmix64 step; used to derive well-separated child seeds from one root
/// seed so that parallel/iterated tasks get independent, reproducible streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for task `stream` under root seed `root`. Deterministic and
/// platform-independent; stream indices need not be contiguous.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

/// Deterministic random generator. Wraps mt19937_64 but performs bounded
/// sampling and double conversion itself so results are identical on every
/// platform (std::uniform_int_distribution is implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n). Rejection sampling: no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t x = engine_();
      if (x < limit) return x % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index into a cumulative-weight table (strictly increasing, last == total).
  /// Deterministic given the same table and stream.
  std::size_t next_index(const std::vector<double>& cumulative) {
    const double u = next_double() * cumulative.back();
    std::size_t lo = 0, hi = cumulative.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cumulative[mid] <= u) lo = mid + 1; else hi = mid;
    }
    return lo;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace snakelab
