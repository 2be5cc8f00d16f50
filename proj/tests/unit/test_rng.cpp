#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "plab/rng.hpp"

using plab::CounterRng;
using plab::make_stream;
using plab::StreamDomain;

TEST_CASE("philox block function matches wired vectors") {
  // Zero counter, zero key.
  auto y = CounterRng::block({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(y[0] == 0x6627e8d5u);
  CHECK(y[1] == 0xe169c58du);
  CHECK(y[2] == 0xbc57ac4cu);
  CHECK(y[3] == 0x9b00dbd8u);

  // All-ones counter and key.
  y = CounterRng::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu});
  CHECK(y[0] == 0x408f276du);
  CHECK(y[1] == 0x41c83b0eu);
  CHECK(y[2] == 0xa20bc7c6u);
  CHECK(y[3] == 0x6d5451fdu);

  // Digits-of-pi vector from the reference implementation.
  y = CounterRng::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u});
  CHECK(y[0] == 0xd16cfe09u);
  CHECK(y[1] == 0x94fdccebu);
  CHECK(y[2] == 0x5001e420u);
  CHECK(y[3] == 0x24126ea1u);
}

TEST_CASE("u64 stream matches frozen values") {
  CounterRng rng(42, 7);
  CHECK(rng.next_u64() == 0xe55410cc67ee6f2cull);
  CHECK(rng.next_u64() == 0x557398d36c7eca35ull);

  CounterRng other(0xDEADBEEFCAFEF00Dull, make_stream(StreamDomain::increments,
                                                      3));
  // Skip to the fifth block (two u64 per block).
  for (int i = 0; i < 10; ++i) other.next_u64();
  CHECK(other.next_u64() == 0x476205145262860bull);
  CHECK(other.next_u64() == 0xdfad64d538dfa983ull);
}

TEST_CASE("regenerating a stream reproduces it exactly") {
  CounterRng a(123, make_stream(StreamDomain::paths, 55));
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 64; ++i) first.push_back(a.next_u64());
  CounterRng b(123, make_stream(StreamDomain::paths, 55));
  for (int i = 0; i < 64; ++i) CHECK(b.next_u64() == first[i]);
}

TEST_CASE("distinct streams and seeds decorrelate") {
  CounterRng a(1, make_stream(StreamDomain::paths, 0));
  CounterRng b(1, make_stream(StreamDomain::paths, 1));
  CounterRng c(2, make_stream(StreamDomain::paths, 0));
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 256; ++i) {
    const auto x = a.next_u64();
    if (x == b.next_u64()) ++same_ab;
    if (x == c.next_u64()) ++same_ac;
  }
  CHECK(same_ab == 0);
  CHECK(same_ac == 0);
}

TEST_CASE("uniforms stay inside the open interval and look uniform") {
  CounterRng rng(9, make_stream(StreamDomain::auxiliary, 0));
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // 4 sigma bands: sd(mean) = 1/sqrt(12 n).
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 4.0 * 0.0745 / std::sqrt(double(n)));
}

TEST_CASE("normals have unit variance and vanishing skew") {
  CounterRng rng(11, make_stream(StreamDomain::auxiliary, 1));
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
  }
  CHECK(std::abs(s1 / n) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s3 / n) < 4.0 * std::sqrt(15.0 / n));
}

TEST_CASE("stream ids keep domain and index separated") {
  CHECK(make_stream(StreamDomain::paths, 5) == 5ull);
  CHECK(make_stream(StreamDomain::increments, 5) == ((1ull << 56) | 5ull));
  CHECK(make_stream(StreamDomain::auxiliary, 0) == (2ull << 56));
  // Index wraps into the low 56 bits and never bleeds into the domain byte.
  CHECK(make_stream(StreamDomain::paths, ~0ull) == 0x00FFFFFFFFFFFFFFull);
}
