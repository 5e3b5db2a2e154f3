#pragma once

// Reproducible random numbers.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so uniform, normal and permutation draws are done
// here with fixed algorithms: 53-bit uniform doubles, Box-Muller normals and
// Fisher-Yates shuffling with rejection-sampled bounded integers.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace retint {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Per-stock sub-seed. Depends only on (master, ticker), never on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view ticker) {
  return splitmix64(splitmix64(master) ^ fnv1a(ticker));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x5851F42D4C957F2DULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform integer on [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace retint
