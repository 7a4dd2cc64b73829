#include "doa/rng.hpp"

namespace doa {

std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(MixSeed(seed)) {}

Rng Rng::Split(std::uint64_t stream) const {
  return Rng(MixSeed(seed_ ^ MixSeed(stream + 0x632be59bd9b4e019ULL)));
}

Complex Rng::ComplexNormal() {
  const double re = half_variance_(engine_);
  const double im = half_variance_(engine_);
  return {re, im};
}

}  // namespace doa
