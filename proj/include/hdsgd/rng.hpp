#pragma once

#include <cstdint>

namespace hdsgd {

// 64-bit avalanche mixer (splitmix64 finalizer). Bijective on uint64.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Documented seed-splitting function: replication i of a root seed runs on
// mix_seed(root, i). Also used for role substreams (burn-in, init draws, ...)
// so that parallel workers and coupled chains never share or reorder draws.
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t tag) {
  return mix64(mix64(root) + tag);
}

// Stream roles. A chain's measurement noise always runs on kNoise so that two
// chains given the same seed consume identical samples (shared-noise coupling).
enum Stream : std::uint64_t {
  kNoise = 1,
  kBurnIn = 2,
  kInit = 3,
  kSwap = 4,
  kPilot = 5,
  kConstants = 6,
};

// Counter-based generator: every draw is a pure function of
// (seed, stream, index, position). Sample k of a stream can be regenerated
// in isolation, which makes shared-noise and single-swap couplings exact and
// results independent of worker count.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
      : key_(mix64(mix64(mix64(seed) + stream) + index)) {}

  std::uint64_t next_u64() {
    return mix64(key_ + (ctr_++) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on (0,1), strictly interior.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; second member of each pair is cached.
  double normal();

  // Student-t with integer dof: Z / sqrt(chi2_nu / nu), chi2 as a sum of
  // squared normals. Deterministic draw count given the stream state.
  double student_t(int nu);

  // Zero-mean Laplace with unit variance (scale 1/sqrt(2)), inverse CDF.
  double laplace();

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

}  // namespace hdsgd
