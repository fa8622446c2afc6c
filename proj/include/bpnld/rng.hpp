#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace bpnld {

// Deterministic, platform-independent generator (xoshiro256** seeded through
// SplitMix64). Substreams are derived from a master seed and an index, so
// per-frame streams can be generated independently and in parallel.
class Rng {
 public:
  explicit Rng(uint64_t seed) { seed_from(seed, 0); }
  Rng(uint64_t seed, uint64_t substream) { seed_from(seed, substream); }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Product-form Poisson sampler; large means are split into chunks so the
  // exp(-mu) threshold stays representable.
  uint32_t poisson(double mu) {
    uint32_t total = 0;
    while (mu > 32.0) {
      total += poisson_small(32.0);
      mu -= 32.0;
    }
    return total + poisson_small(mu);
  }

  // Index into a cumulative distribution (strictly increasing, back() == 1).
  std::size_t sample_cdf(const std::vector<double>& cdf) {
    const double u = uniform();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] <= u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t splitmix_at(uint64_t seed, uint64_t index) {
    uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  void seed_from(uint64_t seed, uint64_t substream) {
    for (int i = 0; i < 4; ++i)
      s_[i] = splitmix_at(seed, substream * 4 + static_cast<uint64_t>(i));
    if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
  }

  uint32_t poisson_small(double mu) {
    if (mu <= 0.0) return 0;
    const double limit = std::exp(-mu);
    uint32_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  uint64_t s_[4];
};

}  // namespace bpnld
