#pragma once

#include <cstdint>
#include <random>

namespace c2lab {

/// Seeded pseudorandom source.
///
/// The generator is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform variates are derived from the top 53 bits directly
/// rather than through <random> distributions, whose algorithms are
/// implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1).
  double NextUnit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t NextBelow(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// True with probability p. Throws std::invalid_argument unless 0 <= p <= 1.
bool Bernoulli(double p, SeededRng& rng);

/// SplitMix64 finalizer; derives independent child seeds from a run seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace c2lab
