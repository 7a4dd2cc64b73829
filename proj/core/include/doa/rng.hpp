#ifndef DOA_RNG_HPP
#define DOA_RNG_HPP

#include <cstdint>
#include <random>

#include "doa/types.hpp"

namespace doa {

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t x);

/// Seeded generator passed explicitly to every synthesis routine. Split()
/// derives a statistically independent child stream without advancing the
/// parent, so callers can hand out streams to parallel work deterministically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng Split(std::uint64_t stream) const;

  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  Complex ComplexNormal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> half_variance_{0.0, 0.70710678118654752440};
};

}  // namespace doa

#endif  // DOA_RNG_HPP
