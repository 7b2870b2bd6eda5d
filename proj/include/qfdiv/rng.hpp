#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

// Deterministic random helpers. std::normal_distribution is implementation
// defined, so Gaussian draws are produced by an explicit Box-Muller transform
// on top of mt19937_64; results are bit-identical across platforms and runs.

namespace qfdiv::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent stream seed for (seed, stream_index), e.g. one per trial.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull;
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9E3779B97F4A7C15ull);
}

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& gen) {
  // u1 in (0,1] so the log is finite.
  const double u1 = 1.0 - uniform01(gen);
  const double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline std::complex<double> complex_gaussian(std::mt19937_64& gen) {
  const double re = gaussian(gen);
  const double im = gaussian(gen);
  return {re, im};
}

}  // namespace qfdiv::rng
