#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "rrw/parallel.hpp"
#include "rrw/rng.hpp"

namespace {

using Block = std::array<std::uint64_t, 4>;

// Known answers of the Philox4x64-10 block function, cross-checked against an
// independent implementation (numpy.random.Philox).
TEST(Philox, KnownAnswerZeroKey) {
  EXPECT_EQ(rrw::philox4x64({1, 0, 0, 0}, {0, 0}),
            (Block{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                   0x907d7a052fd5b4dcULL}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto m = ~0ULL;
  EXPECT_EQ(rrw::philox4x64({m, m, m, m}, {m, m}),
            (Block{0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL,
                   0xa09caebf594f0ba0ULL}));
}

TEST(Philox, KnownAnswerPiDigits) {
  EXPECT_EQ(rrw::philox4x64({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL,
                             0xa4093822299f31d0ULL, 0x082efa98ec4e6c89ULL},
                            {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL}),
            (Block{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
                   0x57bd43b5e52b7fe6ULL}));
}

TEST(Philox, KnownAnswerSmallKey) {
  EXPECT_EQ(rrw::philox4x64({5, 7, 0, 0}, {42, 3}),
            (Block{0xed24cf928e4e4aa3ULL, 0x5d4dc02e2d599534ULL, 0xc94b33a9d3138b33ULL,
                   0x4568618f392005fcULL}));
}

TEST(Stream, FirstWordsComeFromBlockZero) {
  rrw::Stream s(42, 3, 7);
  const auto b0 = rrw::philox4x64({0, 7, 0, 0}, {42, 3});
  const auto b1 = rrw::philox4x64({1, 7, 0, 0}, {42, 3});
  for (int i = 0; i < 4; ++i) EXPECT_EQ(s.next_u64(), b0[i]);
  EXPECT_EQ(s.next_u64(), b1[0]);
  EXPECT_EQ(s.consumed(), 5u);
}

TEST(Stream, Deterministic) {
  rrw::Stream a(9, 1), b(9, 1);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Stream, CoordinatesSeparateStreams) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t seed : {1, 2})
    for (std::uint64_t id : {0, 1})
      for (std::uint64_t lane : {0, 1}) firsts.insert(rrw::Stream(seed, id, lane).next_u64());
  EXPECT_EQ(firsts.size(), 8u);
}

TEST(Stream, UniformInUnitInterval) {
  rrw::Stream s(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Parallel, ResultsIndependentOfWorkers) {
  auto work = [] {
    return rrw::parallel_map<std::uint64_t>(1000, [](std::size_t i) {
      rrw::Stream s(5, i);
      return s.next_u64();
    });
  };
  rrw::set_worker_count(1);
  const auto one = work();
  rrw::set_worker_count(4);
  const auto four = work();
  rrw::set_worker_count(0);
  EXPECT_EQ(one, four);
}

TEST(Parallel, RethrowsFirstException) {
  rrw::set_worker_count(3);
  EXPECT_THROW(rrw::parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  rrw::set_worker_count(0);
}

}  // namespace
