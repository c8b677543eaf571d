#pragma once

#include <cstdint>

namespace ineqlab {

// Counter-based uniform generator: the value at (seed, index) is a pure
// function of both, so any partition of index ranges across threads produces
// the same stream.  Mixing is the splitmix64 finalizer over a Weyl sequence.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t index) const {
    std::uint64_t z = seed_ + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in the open interval (0,1); never returns 0 or 1 exactly.
  double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  std::uint64_t seed() const { return seed_; }

  // Stable derived seed for a named substream.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    CounterRng r(seed ^ 0xA5A5A5A55A5A5A5AULL);
    return r.bits(tag);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace ineqlab
