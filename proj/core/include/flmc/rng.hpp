#pragma once

#include <array>
#include <cstdint>

namespace flmc {

// Deterministic random streams. Every transformation below is fixed by this
// header so that independent implementations can reproduce runs bit-exactly:
//
//   splitmix64(state):
//     state += 0x9E3779B97F4A7C15
//     z = state
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     return z ^ (z >> 31)
//
//   substream seed for replica r under master seed S:
//     state = S + 0x9E3779B97F4A7C15 * (r + 1);  seed' = splitmix64(state)
//
//   generator: xoshiro256++ whose four state words are the first four
//   splitmix64 outputs of the (sub)stream seed.
//
//   uniform01():      (next() >> 11) * 2^-53              in [0, 1)
//   uniform_open01(): ((next() >> 11) + 1) * 2^-53        in (0, 1]
//   gaussian():       sqrt(-2 ln u1) * cos(2 pi u2),  u1 = uniform_open01(),
//                     u2 = uniform01(); consumes exactly two words per draw
//   exponential():    -ln(uniform_open01())

/// One splitmix64 step; advances `state` and returns the output word.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of the numbered substream: splitmix64 of
/// master + 0x9E3779B97F4A7C15 * (index + 1).
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index);

class Rng {
public:
  explicit Rng(std::uint64_t seed);

  /// Stream for a numbered replica; independent of all other indices.
  static Rng substream(std::uint64_t master_seed, std::uint64_t replica_index);

  std::uint64_t next_u64();

  double uniform01();       // [0, 1), 53-bit resolution
  double uniform_open01();  // (0, 1]
  double gaussian();        // standard normal, two words per draw
  double exponential();     // unit-rate exponential, one word per draw

private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace flmc
