#pragma once

#include <cstdint>
#include <random>

namespace steerlat {

// splitmix64 finalizer.  Used to derive statistically independent streams
// from (seed, index...) tuples; identical output on every platform.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic stream seed from a base seed and up to three indices.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                          std::uint64_t b = 0, std::uint64_t c = 0);

// mt19937_64 core with hand-rolled uniform and Box-Muller normal transforms,
// so the produced sequences are pinned bit-for-bit by the C++ standard
// (std::normal_distribution is implementation-defined; we avoid it).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; caches the paired variate.
  double normal();

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace steerlat
