#pragma once

#include <cstdint>
#include <random>

namespace volq {

/// Seeded generator used by every simulator. The raw engine is the standard
/// 64-bit Mersenne Twister (its output sequence is fixed by the C++
/// standard); uniforms and normals are derived here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  static constexpr const char* kIdentity = "mt19937_64/u53/polar-normal v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method; the second deviate of
  /// each accepted pair is cached.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace volq
