#include "c2lab/sim/rng.h"

#include <cmath>
#include <stdexcept>

namespace c2lab {

std::uint64_t SeededRng::NextBelow(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("NextBelow: bound must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

bool Bernoulli(double p, SeededRng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli probability outside [0,1]");
  }
  if (p == 0.0) return false;
  return rng.NextUnit() < p;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace c2lab
