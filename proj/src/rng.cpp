#include "infersched/rng.hpp"

#include <cmath>
#include <numbers>

namespace infersched {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  // Fold the 64-bit seed into the generator's 31-bit seed domain.
  const std::uint64_t folded = mix_seed(seed, 0);
  std::int32_t mj =
      161803398 - static_cast<std::int32_t>(folded % static_cast<std::uint64_t>(kModulus));
  if (mj < 0) mj += kModulus;
  state_[55] = mj;
  std::int32_t mk = 1;
  for (int i = 1; i < 55; ++i) {
    const int ii = (21 * i) % 55;
    state_[ii] = mk;
    mk = mj - mk;
    if (mk < 0) mk += kModulus;
    mj = state_[ii];
  }
  for (int k = 1; k < 5; ++k) {
    for (int i = 1; i < 56; ++i) {
      state_[i] -= state_[1 + (i + 30) % 55];
      if (state_[i] < 0) state_[i] += kModulus;
    }
  }
  inext_ = 0;
  inextp_ = 21;
}

std::int32_t Rng::next() {
  if (++inext_ >= 56) inext_ = 1;
  if (++inextp_ >= 56) inextp_ = 1;
  std::int32_t value = state_[inext_] - state_[inextp_];
  if (value == kModulus) --value;
  if (value < 0) value += kModulus;
  state_[inext_] = value;
  return value;
}

double Rng::uniform() {
  // Two draws of ~31 bits each; keep 53 of them.
  const std::uint64_t hi = static_cast<std::uint64_t>(next()) & 0x3FFFFFFu;  // 26 bits
  const std::uint64_t lo = static_cast<std::uint64_t>(next()) & 0x7FFFFFFu;  // 27 bits
  return static_cast<double>((hi << 27) | lo) * 0x1.0p-53;
}

std::int32_t Rng::uniform_int(std::int32_t lo, std::int32_t hi) {
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  if (span <= 1) return lo;
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = static_cast<std::uint64_t>(kModulus) -
                              static_cast<std::uint64_t>(kModulus) % span;
  std::uint64_t draw;
  do {
    draw = static_cast<std::uint64_t>(next());
  } while (draw >= limit);
  return static_cast<std::int32_t>(lo + static_cast<std::int64_t>(draw % span));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace infersched
