#pragma once

#include <cstdint>

namespace ccs {

// SplitMix64: stable 64-bit generator used for every random draw in the
// library. Draw sequences depend only on the seed, never on the platform,
// so fixed-seed runs are bit-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform draw in (0, hi]; never returns exactly zero.
  double uniform_pos(double hi) { return (1.0 - uniform01()) * hi; }

  bool bernoulli(double p) { return uniform01() < p; }

  // Inclusive range draw via rejection-free scaling; fine for small ranges.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

// Substream derivation: hash-chains the master seed with stream indices so
// parallel sweeps get independent, reproducible streams per instance.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 h(master ^ (0x2545f4914f6cdd1dULL * (index + 1)));
  h.next();
  return h.next();
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

}  // namespace ccs
