#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flmc/rng.hpp"

using namespace flmc;

// Frozen against an independent splitmix64 / xoshiro256++ implementation so
// cross-language ports can be checked word for word.
TEST_CASE("splitmix64 reference outputs", "[rng]") {
  std::uint64_t state = 0;
  REQUIRE(splitmix64(state) == 0xe220a8397b1dcdafULL);
  REQUIRE(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
  REQUIRE(splitmix64(state) == 0x06c45d188009454fULL);
  REQUIRE(splitmix64(state) == 0xf88bb8a8724c81ecULL);

  state = 42;
  REQUIRE(splitmix64(state) == 0xbdd732262feb6e95ULL);
}

TEST_CASE("substream seed derivation is the documented mix", "[rng]") {
  REQUIRE(derive_stream_seed(42, 0) == 0x28efe333b266f103ULL);
  REQUIRE(derive_stream_seed(42, 1) == 0x47526757130f9f52ULL);
  REQUIRE(derive_stream_seed(0, 7) == 0x3ee5789041c98ac3ULL);
}

TEST_CASE("xoshiro256++ reference outputs and uniforms", "[rng]") {
  Rng rng(42);
  REQUIRE(rng.next_u64() == 0xd0764d4f4476689fULL);
  REQUIRE(rng.next_u64() == 0x519e4174576f3791ULL);
  REQUIRE(rng.next_u64() == 0xfbe07cfb0c24ed8cULL);

  Rng again(42);
  REQUIRE(again.uniform01() == 0.8143051451229099);
  REQUIRE(again.uniform01() == 0.3188210400616611);
  REQUIRE(again.uniform01() == 0.9838941681774888);
}

TEST_CASE("same seed reproduces, different streams differ", "[rng]") {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());

  Rng r0 = Rng::substream(9, 0);
  Rng r1 = Rng::substream(9, 1);
  bool differs = false;
  for (int i = 0; i < 16 && !differs; ++i) differs = r0.next_u64() != r1.next_u64();
  REQUIRE(differs);
}

TEST_CASE("uniforms live in their stated ranges", "[rng]") {
  Rng rng(5);
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.uniform_open01();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("gaussian draws consume two words and match N(0,1) moments", "[rng]") {
  Rng rng(77);
  Rng twin(77);
  const double g = rng.gaussian();
  twin.next_u64();
  twin.next_u64();
  REQUIRE(rng.next_u64() == twin.next_u64());  // stream positions agree
  (void)g;

  Rng sampler(1234);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = sampler.gaussian();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.01);
  REQUIRE(var == Catch::Approx(1.0).epsilon(0.02));
}

TEST_CASE("exponential has unit mean", "[rng]") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential();
  REQUIRE(sum / n == Catch::Approx(1.0).epsilon(0.02));
}
