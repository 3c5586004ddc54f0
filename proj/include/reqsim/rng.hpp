#pragma once

#include <cstdint>
#include <random>

namespace reqsim {

// All randomness in the project flows through this wrapper. std:: distributions
// are never used because their output sequences are implementation-defined;
// the explicit constructions below are reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), rejection sampled to avoid modulo bias.
  std::uint64_t uniform_below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second value is cached.
  double normal();

  // Stable substream derivation (splitmix64 of seed and stream id). Used to
  // hand independent, reproducible streams to parallel tasks.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace reqsim
