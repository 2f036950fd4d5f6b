#include <gtest/gtest.h>

#include <cmath>

#include "rrw/error.hpp"
#include "rrw/stats.hpp"
#include "rrw/urn.hpp"

namespace {

using rrw::ReinforcementFunction;
using rrw::UrnState;

ReinforcementFunction F(const char* s) { return ReinforcementFunction::parse(s); }

const char* const kBuiltins[] = {"const(0.5)", "const(0.75)", "linear(0.4)", "polya",
                                 "quartic(2)", "mix"};

TEST(Step, Examples) {
  const auto half = UrnState::make(0.5, 2);
  auto s = rrw::urn_step(half, F("const(0.9)"), 0.5);
  EXPECT_DOUBLE_EQ(s.alpha(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.l(), 3.0);
  s = rrw::urn_step(half, F("const(0.9)"), 0.95);
  EXPECT_DOUBLE_EQ(s.alpha(), 1.0 / 3.0);
  s = rrw::urn_step(UrnState::make(2.0 / 3.0, 3), F("polya"), 0.6);
  EXPECT_DOUBLE_EQ(s.alpha(), 0.75);
  EXPECT_DOUBLE_EQ(s.l(), 4.0);
}

TEST(Step, InvalidState) {
  EXPECT_THROW(UrnState::make(1.2, 1), rrw::Error);
  EXPECT_THROW(UrnState::make(0.5, 0), rrw::Error);
}

TEST(Simulate, Deterministic) {
  const auto a = rrw::simulate_urn(F("polya"), UrnState::make(0.5, 2), 5, rrw::Stream(3, 0));
  const auto b = rrw::simulate_urn(F("polya"), UrnState::make(0.5, 2), 5, rrw::Stream(3, 0));
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.draws, b.draws);
  EXPECT_EQ(a.states.size(), 6u);
}

TEST(Simulate, RedCountIsInteger) {
  const auto init = UrnState::make(0.3, 1.7);
  const auto t = rrw::simulate_urn(F("mix"), init, 100000, rrw::Stream(1, 0));
  for (std::size_t n = 0; n < t.states.size(); n += 997) {
    const double k = t.states[n].l() * t.states[n].alpha() - init.l() * init.alpha();
    ASSERT_NEAR(k, std::round(k), 1e-9);
    ASSERT_GE(k, -1e-9);
    ASSERT_LE(k, static_cast<double>(n) + 1e-9);
  }
}

TEST(Exact, BinomialRow) {
  const rrw::ExactUrnLaw law(F("const(0.5)"), UrnState::make(0.5, 2), 2);
  EXPECT_DOUBLE_EQ(law.prob(2, 0), 0.25);
  EXPECT_DOUBLE_EQ(law.prob(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(law.prob(2, 2), 0.25);
}

TEST(Exact, PolyaUniform) {
  const rrw::ExactUrnLaw law(F("polya"), UrnState::make(0.5, 2), 50);
  for (std::size_t k = 0; k <= 2; ++k) EXPECT_NEAR(law.prob(2, k), 1.0 / 3.0, 1e-15);
  for (std::size_t k = 0; k <= 50; ++k) EXPECT_NEAR(law.prob(50, k), 1.0 / 51.0, 1e-10);
}

TEST(Exact, QuarticFirstDrift) {
  const rrw::ExactUrnLaw law(F("quartic(2)"), UrnState::make(0.5, 2), 1);
  const auto f = F("quartic(2)");
  const double d1 = law.expect(1, [&](double a) { return 2 * f(a) - 1; });
  EXPECT_NEAR(d1, 2.0 / 648.0, 1e-15);
}

TEST(Exact, RowsNormalized) {
  for (const char* name : kBuiltins) {
    const rrw::ExactUrnLaw law(F(name), UrnState::make(0.5, 2), 300);
    for (std::size_t n = 0; n <= 300; n += 50) {
      double s = 0;
      for (double p : law.row(n)) s += p;
      EXPECT_NEAR(s, 1.0, 1e-12) << name;
    }
  }
}

TEST(Exact, HorizonGuard) {
  try {
    rrw::ExactUrnLaw(F("polya"), UrnState::make(0.5, 2), 20001);
    FAIL();
  } catch (const rrw::Error& e) {
    EXPECT_EQ(e.kind(), rrw::ErrorKind::HorizonTooLarge);
  }
}

// Brute-force enumeration of all 2^n draw sequences as an independent oracle.
double enumerate(const ReinforcementFunction& f, UrnState s, int n, int k) {
  if (n == 0) return k == 0 ? 1.0 : 0.0;
  const double p = f(s.alpha());
  double total = (1 - p) * enumerate(f, rrw::advance(s, false), n - 1, k);
  if (k > 0) total += p * enumerate(f, rrw::advance(s, true), n - 1, k - 1);
  return total;
}

TEST(Exact, MatchesEnumeration) {
  for (const char* name : kBuiltins) {
    const auto f = F(name);
    const auto init = UrnState::make(0.4, 2.5);
    const rrw::ExactUrnLaw law(f, init, 10);
    for (int k = 0; k <= 10; ++k)
      EXPECT_NEAR(law.prob(10, k), enumerate(f, init, 10, k), 1e-14) << name;
  }
}

TEST(Exact, OddSymmetryGivesZeroDrift) {
  const auto f = F("polya");
  const rrw::ExactUrnLaw law(f, UrnState::make(0.5, 2), 1000);
  for (std::size_t n : {1u, 10u, 100u, 1000u})
    EXPECT_NEAR(law.expect(n, [&](double a) { return 2 * f(a) - 1; }), 0.0, 1e-12);
}

TEST(MonteCarlo, AgreesWithExactLaw) {
  const std::size_t n = 100, reps = 20000;
  for (const char* name : kBuiltins) {
    const auto f = F(name);
    const auto init = UrnState::make(0.5, 2);
    const rrw::ExactUrnLaw law(f, init, n);
    const auto g = [](double a) { return a * a; };
    rrw::stats::Accumulator acc;
    for (std::size_t r = 0; r < reps; ++r) {
      rrw::Stream s(11, r);
      acc.add(g(rrw::run_urn(f, init, n, s).alpha()));
    }
    EXPECT_LE(std::abs(acc.mean() - law.expect(n, g)), 4 * acc.std_error()) << name;
  }
}

TEST(MonteCarlo, PolyaLimitIsUniform) {
  const auto f = F("polya");
  std::vector<double> xs;
  for (std::size_t r = 0; r < 10000; ++r) {
    rrw::Stream s(2, r);
    xs.push_back(rrw::run_urn(f, UrnState::make(0.5, 2), 1000, s).alpha());
  }
  EXPECT_LT(rrw::stats::ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.02);
}

TEST(MonteCarlo, MixConvergesToHalf) {
  const auto f = F("mix");
  std::size_t close = 0;
  const std::size_t reps = 2000;
  for (std::size_t r = 0; r < reps; ++r) {
    rrw::Stream s(4, r);
    if (std::abs(rrw::run_urn(f, UrnState::make(0.5, 2), 10000, s).alpha() - 0.5) < 0.05) ++close;
  }
  EXPECT_GE(close, static_cast<std::size_t>(0.99 * reps));
}

}  // namespace
