#include "flmc/rng.hpp"

#include <cmath>

namespace flmc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  state += kGolden;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
  if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;  // xoshiro needs nonzero state
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t state = master_seed + kGolden * (index + 1);
  return splitmix64(state);
}

Rng Rng::substream(std::uint64_t master_seed, std::uint64_t replica_index) {
  return Rng(derive_stream_seed(master_seed, replica_index));
}

std::uint64_t Rng::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_open01() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gaussian() {
  const double u1 = uniform_open01();
  const double u2 = uniform01();
  constexpr double two_pi = 6.28318530717958647693;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

double Rng::exponential() { return -std::log(uniform_open01()); }

}  // namespace flmc
