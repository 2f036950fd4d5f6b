#include <gtest/gtest.h>

#include <cmath>

#include "rrw/error.hpp"
#include "rrw/funcs.hpp"

namespace {

using rrw::ReinforcementFunction;

ReinforcementFunction F(const char* s) { return ReinforcementFunction::parse(s); }

rrw::ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const rrw::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return rrw::ErrorKind::UsageError;
}

TEST(Analyze, Constant) {
  const auto r = rrw::analyze(F("0.5"));
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_NEAR(r.points[0].p, 0.5, 1e-12);
  EXPECT_EQ(r.points[0].fprime, 0.0);
  EXPECT_TRUE(r.points[0].stable);
  EXPECT_TRUE(r.unique);
  EXPECT_TRUE(r.ge_half);
}

TEST(Analyze, Quartic) {
  const auto r = rrw::analyze(F("0.5 + 2*(x-0.5)^4"));
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_NEAR(r.points[0].p, 0.5, 1e-9);
  EXPECT_EQ(r.fprime_half, 0.0);
  EXPECT_EQ(r.fsecond_half, 0.0);
  EXPECT_TRUE(r.ge_half);
  EXPECT_TRUE(r.unique);
}

TEST(Analyze, PolyaIsNotIsolated) {
  EXPECT_EQ(kind_of([] { rrw::analyze(F("x")); }), rrw::ErrorKind::NonIsolatedFixedPoints);
  EXPECT_EQ(kind_of([] { rrw::analyze(F("polya")); }), rrw::ErrorKind::NonIsolatedFixedPoints);
}

TEST(Analyze, RangeViolation) {
  EXPECT_EQ(kind_of([] { rrw::analyze(F("x - 0.5")); }), rrw::ErrorKind::RangeViolation);
  EXPECT_EQ(kind_of([] { rrw::analyze(F("1.5 * x")); }), rrw::ErrorKind::RangeViolation);
}

TEST(Analyze, ConstantAwayFromHalf) {
  const auto r = rrw::analyze(F("const(0.7)"));
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_NEAR(r.points[0].p, 0.7, 1e-12);
  EXPECT_FALSE(r.has_fixed_point_at_half());
}

TEST(Analyze, Mix) {
  const auto r = rrw::analyze(F("mix"));
  ASSERT_TRUE(r.unique);
  EXPECT_NEAR(r.points[0].p, 0.5, 1e-9);
  EXPECT_NEAR(r.fprime_half, 0.0, 1e-12);
  EXPECT_NEAR(r.fsecond_half, 3.0, 1e-12);
  EXPECT_FALSE(r.ge_half);
}

TEST(Analyze, LinearSlope) {
  const auto r = rrw::analyze(F("linear(0.4)"));
  ASSERT_TRUE(r.unique);
  EXPECT_NEAR(r.fprime_half, 0.4, 1e-12);
  EXPECT_TRUE(r.points[0].stable);
}

TEST(Analyze, ThreeFixedPoints) {
  // f(x) - x = t (1/2 - 4 t^2) with t = x - 1/2: roots at 0 and +-1/sqrt(8).
  const auto r = rrw::analyze(F("0.5 + 1.5*(x-0.5) - 4*(x-0.5)^3"));
  ASSERT_EQ(r.points.size(), 3u);
  const double t0 = 1.0 / std::sqrt(8.0);
  EXPECT_NEAR(r.points[0].p, 0.5 - t0, 1e-9);
  EXPECT_NEAR(r.points[1].p, 0.5, 1e-9);
  EXPECT_NEAR(r.points[2].p, 0.5 + t0, 1e-9);
  EXPECT_TRUE(r.points[0].stable);
  EXPECT_FALSE(r.points[1].stable);
  EXPECT_TRUE(r.points[2].stable);
  EXPECT_FALSE(r.unique);
}

TEST(Family, UnitScaleIsIdentity) {
  const auto f = F("quartic(2)");
  const auto g = rrw::make_family(f, 1.0);
  for (int i = 0; i <= 1000; ++i) EXPECT_DOUBLE_EQ(g(i / 1000.0), f(i / 1000.0));
}

TEST(Family, ZeroScaleIsHalf) {
  const auto g = rrw::make_family(F("mix"), 0.0);
  for (int i = 0; i <= 1000; ++i) EXPECT_DOUBLE_EQ(g(i / 1000.0), 0.5);
}

TEST(Family, NegativeScaleRejected) {
  EXPECT_EQ(kind_of([] { rrw::make_family(F("mix"), -1.0); }), rrw::ErrorKind::InvalidParameter);
}

TEST(Family, MonotoneInScaleAndCapped) {
  const auto f = F("quartic(2)");
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    double prev = 0.5;
    for (double u : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
      const double v = rrw::make_family(f, u)(x);
      EXPECT_GE(v, prev);
      EXPECT_LE(v, 1.0);
      EXPECT_NEAR(2 * v - 1, std::min(u * (2 * f(x) - 1), 1.0), 1e-15);
      prev = v;
    }
  }
}

TEST(Predicates, Symmetry) {
  EXPECT_TRUE(rrw::is_symmetric(F("quartic(2)")));
  EXPECT_TRUE(rrw::is_symmetric(F("mix")));
  EXPECT_FALSE(rrw::is_symmetric(F("linear(0.4)")));
}

TEST(Predicates, Identity) {
  EXPECT_TRUE(rrw::is_identity(F("polya")));
  EXPECT_TRUE(rrw::is_identity(F("2*x - x")));
  EXPECT_FALSE(rrw::is_identity(F("linear(0.99)")));
}

TEST(Predicates, Order) {
  EXPECT_LT(rrw::first_order_violation(F("quartic(1)"), F("quartic(2)")), 0.0);
  const double x = rrw::first_order_violation(F("linear(0.4)"), F("const(0.5)"));
  EXPECT_GT(x, 0.5);
}

TEST(Clamp, CountsOutOfRangeEvaluations) {
  const auto f = F("x - 0.5");
  EXPECT_EQ(f(0.25), rrw::kMinReinforcement);
  EXPECT_EQ(f(0.75), 0.25);
  EXPECT_EQ(f.clamp_count(), 1u);
}

}  // namespace
