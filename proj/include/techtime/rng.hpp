#pragma once

#include <cstdint>
#include <string_view>

namespace techtime {

// PCG32: small, fast, and gives identical streams on every platform, which the
// stdlib distributions do not guarantee. Reproducibility contracts here are
// byte-level, so all draws go through this.
class Pcg32 {
 public:
  Pcg32() : Pcg32(0x853c49e6748fea9bULL, 0xda3e39cb94b95bdbULL) {}

  Pcg32(uint64_t seed, uint64_t stream) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  uint32_t next_u32() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31u));
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform in [0, n) without modulo bias.
  uint32_t bounded(uint32_t n) {
    uint32_t threshold = (~n + 1u) % n;
    for (;;) {
      uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  float next_float() { return static_cast<float>(next_u32() >> 8) * 0x1.0p-24f; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  uint64_t state_;
  uint64_t inc_;
};

// FNV-1a: stable across platforms, unlike std::hash.
constexpr uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named substream of the run seed: every source of randomness in the pipeline
// is (seed, purpose[, index]) so whole runs replay from one --seed.
inline Pcg32 substream(uint64_t seed, std::string_view purpose, uint64_t index = 0) {
  return Pcg32(seed, fnv1a64(purpose) ^ index);
}

}  // namespace techtime
