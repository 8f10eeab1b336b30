#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>

#include "dblab/errors.hpp"

namespace dblab {

namespace detail {

// splitmix64 finalizer; stateless mixing primitive used for seeding and
// stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  return mix64(x);
}

}  // namespace detail

// Deterministic seeded generator (xoshiro256**). Every piece of randomness in
// the lab flows through this type, so any experiment replays bit-for-bit from
// its seed. A generator is single-owner; parallel workers each take
// derive(stream) children, which are keyed off the construction seed (not the
// current state) and therefore order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) s = detail::splitmix64_next(x);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = std::rotl(state_[1] * 5u, 7) * 9u;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  std::uint8_t next_bit() {
    if (bit_count_ == 0) {
      bit_buffer_ = next_u64();
      bit_count_ = 64;
    }
    const std::uint8_t b = static_cast<std::uint8_t>(bit_buffer_ & 1u);
    bit_buffer_ >>= 1;
    --bit_count_;
    return b;
  }

  // Uniform draw from [0, k); unbiased via rejection.
  std::size_t next_index(std::size_t k) {
    if (k == 0) throw ConfigError("Rng::next_index: k must be positive");
    const std::uint64_t bound = k;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < limit) return static_cast<std::size_t>(v % bound);
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Child generator keyed by (construction seed, stream).
  Rng derive(std::uint64_t stream) const {
    const std::uint64_t child =
        detail::mix64(seed_ ^ detail::mix64(stream + 0x632BE59BD9B4E019ULL));
    return Rng(child);
  }

 private:
  std::uint64_t state_[4] = {};
  std::uint64_t seed_ = 0;
  std::uint64_t bit_buffer_ = 0;
  int bit_count_ = 0;
};

}  // namespace dblab
