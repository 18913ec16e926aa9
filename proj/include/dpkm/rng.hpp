#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace dpkm {

inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t hash64(uint64_t x) {
  uint64_t s = x;
  return splitmix64(s);
}

// FNV-1a over bytes, finished with a splitmix round.
inline uint64_t hash_bytes(const void* data, size_t len, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ull ^ (seed * 0x9e3779b97f4a7c15ull);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return hash64(h);
}

inline uint64_t hash_str(std::string_view s, uint64_t seed) {
  return hash_bytes(s.data(), s.size(), seed);
}

// xoshiro256++ with splitmix-expanded seeding. All distributions below are
// implemented directly on the raw stream so results are reproducible across
// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }
  Rng(uint64_t seed, std::string_view tag) : Rng(hash_str(tag, seed)) {}

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Unbiased integer in [0, n).
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    uint64_t r;
    do {
      r = next();
    } while (r < threshold);
    return r % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Marsaglia polar method; one value cached.
  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u, v, s2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s2 = u * u + v * v;
    } while (s2 >= 1.0 || s2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s2) / s2);
    cache_ = v * f;
    has_cache_ = true;
    return u * f;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace dpkm
