#pragma once

#include <cstdint>
#include <random>

namespace abqfe {

// SplitMix64 mixing step; used to derive independent per-replica seeds so that
// results do not depend on which thread executes which replica.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(0x9e3779b97f4a7c15ull * (stream + 1)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Binomial draw as an explicit Bernoulli count; trial counts here are at most
  // a few hundred and the draw sequence stays identical across platforms.
  int bernoulli_count(int trials, double p) {
    int c = 0;
    for (int i = 0; i < trials; ++i) c += uniform() < p ? 1 : 0;
    return c;
  }

  double normal(double mean, double sigma) {
    // Box-Muller on demand; second variate discarded to keep the stream
    // position independent of call history.
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace abqfe
