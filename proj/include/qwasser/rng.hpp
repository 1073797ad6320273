#pragma once

#include <cstdint>

namespace qwasser {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen as the project-wide PRNG: the
// update is three xor-shift-multiply steps on a 64-bit counter, so streams
// are bit-reproducible on every platform and can be split by reseeding with
// an output word. All randomized tests and samplers derive from this
// generator; the algorithm is frozen.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Child generator seeded from this stream's next output word.
  SplitMix64 split() { return SplitMix64(next_u64()); }

  // Independent stream for a (seed, index) pair; used to give every grid
  // node / sampled pair its own generator so parallel evaluation order
  // cannot change results.
  static SplitMix64 for_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ mix(index + 0x9E3779B97F4A7C15ULL));
    g.next_u64();
    return g;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace qwasser
