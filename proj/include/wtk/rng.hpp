#pragma once

#include <cstdint>
#include <limits>

namespace wtk {

// SplitMix64. Chosen over the std engines because the bounded draw below is
// bit-reproducible in any language, which the cross-implementation test
// vectors rely on.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t u = (*this)();
      if (u >= threshold) return u % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace wtk
