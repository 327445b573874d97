#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pairclust {

// Seeded RNG with library-independent draw sequences.  std::uniform_*_distribution
// is implementation-defined, so every bounded draw is derived here directly from
// the mt19937_64 output stream; identical seeds give identical results everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
  uint64_t uniform_below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  size_t uniform_index(size_t n) { return static_cast<size_t>(uniform_below(n)); }

  // Uniform double in [lo, hi) with 53 random mantissa bits.
  double uniform_real(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Derives an independent stream seed, e.g. per epoch or per stage.
  static uint64_t mix(uint64_t seed, uint64_t stream) {
    return splitmix(seed ^ splitmix(stream + 0x9e3779b97f4a7c15ULL));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pairclust
