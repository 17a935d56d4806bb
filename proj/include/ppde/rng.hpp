#ifndef PPDE_RNG_HPP
#define PPDE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ppde {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so concurrent users stay deterministic.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

/// Uniform in (0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return (counter_bits(seed, stream, counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Standard normal via Box-Muller on two counter draws.
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  const double u1 = counter_uniform(seed, stream, 2 * counter);
  const double u2 = counter_uniform(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace ppde

#endif
