#ifndef CRITNLS_RNG_HPP
#define CRITNLS_RNG_HPP

#include <cstdint>

namespace critnls {

// splitmix64; self-contained so seeded trial families are byte-reproducible
// across standard libraries.
struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53;
  }
};

}  // namespace critnls

#endif  // CRITNLS_RNG_HPP
