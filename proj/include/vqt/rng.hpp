#pragma once

// Deterministic random number helpers.
//
// Every stochastic component in the library derives an independent
// mt19937_64 stream from a (seed, tag...) tuple via splitmix64 mixing.
// Uniform and normal variates are generated from raw engine output
// instead of std::uniform_real_distribution / std::normal_distribution,
// whose exact draw sequences are implementation-defined.  This keeps
// results bit-identical across standard library versions and across
// worker counts (each parallel work item owns its own derived stream).

#include <cmath>
#include <cstdint>
#include <random>

namespace vqt::rng {

// One round of the splitmix64 output function.  Used both as a mixer for
// deriving child seeds and as a cheap avalanching hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a parent seed and one or more stream tags.
inline std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Tags>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, Tags... rest) {
  return derive_seed(splitmix64(seed ^ splitmix64(tag)), rest...);
}

template <typename... Tags>
std::mt19937_64 make_engine(std::uint64_t seed, Tags... tags) {
  return std::mt19937_64(derive_seed(seed, static_cast<std::uint64_t>(tags)...));
}

// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Uniform integer in [0, n).  Rejection-free modulo is fine here: n is
// always tiny compared to 2^64, so the bias is far below double precision.
inline std::uint64_t uniform_index(std::mt19937_64& eng, std::uint64_t n) {
  return eng() % n;
}

// Standard normal variate via Box-Muller on deterministic uniforms.
inline double normal(std::mt19937_64& eng) {
  double u1 = uniform01(eng);
  double u2 = uniform01(eng);
  while (u1 <= 0.0) u1 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace vqt::rng
