#pragma once

// Splittable deterministic RNG. Streams are xoshiro256++ engines whose
// state is derived from a 64-bit key via splitmix64; child(k) derives a
// substream from the parent's key alone (not its consumption state), so
// per-block / per-replicate streams generated in parallel match serial
// output exactly.

#include <cstdint>
#include <string_view>

namespace netcg {

inline uint64_t splitmix64_step(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class SplitRng {
 public:
  explicit SplitRng(uint64_t key) : key_(key) {
    uint64_t x = key;
    for (auto& w : s_) w = splitmix64_step(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  uint64_t key() const { return key_; }

  SplitRng child(uint64_t salt) const {
    uint64_t x = key_ ^ (salt * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    uint64_t derived = splitmix64_step(x);
    return SplitRng(derived);
  }

  SplitRng child(std::string_view name) const { return child(fnv1a64(name)); }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Unbiased integer in [0, n).
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  uint64_t key_;
  uint64_t s_[4];
};

}  // namespace netcg
