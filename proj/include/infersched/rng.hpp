#ifndef INFERSCHED_RNG_HPP_
#define INFERSCHED_RNG_HPP_

#include <array>
#include <cstdint>

namespace infersched {

// Knuth's subtractive generator (the ran3 / System.Random lineage) seeded
// from a 64-bit value. Only integer arithmetic is used for the stream, so
// sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Uniform integer in [0, 2^31 - 1).
  std::int32_t next();
  // Uniform real in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [lo, hi], inclusive.
  std::int32_t uniform_int(std::int32_t lo, std::int32_t hi);
  // Standard normal via Box-Muller; caches the second variate.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::int32_t kModulus = 2147483647;

  std::array<std::int32_t, 56> state_{};
  int inext_ = 0;
  int inextp_ = 21;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; derives independent child seeds from a parent seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace infersched

#endif  // INFERSCHED_RNG_HPP_
