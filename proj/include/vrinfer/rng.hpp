#pragma once

// Self-contained deterministic RNG.  std::normal_distribution and friends are
// implementation-defined, which would break the byte-identical-output
// guarantee across standard libraries, so the generator and the variate
// transforms live here: xoshiro256++ seeded via splitmix64, Gaussians via the
// Marsaglia polar method.

#include <cmath>
#include <cstdint>
#include <vector>

namespace vrinfer {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from (seed, index) pairs, e.g. one per
// simulated user, so population generation can fan out deterministically.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL);
  splitmix64(s);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mean = 0.0, double sigma = 0.0) {
    if (sigma == 0.0) return mean;
    if (have_spare_) {
      have_spare_ = false;
      return mean + sigma * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return mean + sigma * u * m;
  }

  // Truncated normal by rejection; bounds assumed within a few sigma of mean.
  double normal_trunc(double mean, double sigma, double lo, double hi) {
    if (sigma == 0.0) return mean < lo ? lo : (mean > hi ? hi : mean);
    for (;;) {
      double x = normal(mean, sigma);
      if (x >= lo && x <= hi) return x;
    }
  }

  double laplace(double scale) {
    // Inverse CDF: sign(u) * -scale * ln(1 - 2|u|), u uniform in (-1/2, 1/2).
    double u = uniform01() - 0.5;
    double mag = -scale * std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
  }

  // Index draw from unnormalized weights.
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4] = {};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vrinfer
