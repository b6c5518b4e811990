#pragma once

#include <cmath>
#include <cstdint>

#include "mgoig/rational.hpp"

namespace mgoig {

// Counter-derived splitmix64 stream. Trial i of an experiment runs on
// Rng(derive_seed(master, i)), so trial sets are reproducible and can be
// scheduled in any order.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  uint64_t below(uint64_t n) {
    // modulo with rejection to stay unbiased
    uint64_t threshold = (~uint64_t(0) - n + 1) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Bernoulli with rational parameter; quantized at 2^-64.
  bool bernoulli(const Rat& p) {
    if (p <= Rat(0)) return false;
    if (p >= Rat(1)) return true;
    Int r(next_u64());
    return r * p.denominator() < (Int(1) << 64) * p.numerator();
  }

  // Number of trials up to and including the first success; p in (0,1].
  long long geometric(double p) {
    if (p >= 1.0) return 1;
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return 1 + static_cast<long long>(std::floor(std::log(u) / std::log1p(-p)));
  }

 private:
  uint64_t state_;
};

}  // namespace mgoig
