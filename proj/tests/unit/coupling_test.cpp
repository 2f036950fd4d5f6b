#include <gtest/gtest.h>

#include <cmath>

#include "rrw/coupling.hpp"
#include "rrw/drift.hpp"
#include "rrw/error.hpp"

namespace {

using rrw::ReinforcementFunction;
using rrw::UrnState;

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

TEST(FunctionOrder, SameFunctionGivesSamePath) {
  const auto r = rrw::couple_function_order(F("mix"), F("mix"), UrnState::make(0.5, 2), 1000,
                                            rrw::Stream(1, 0));
  EXPECT_EQ(r.first.states, r.second.states);
  EXPECT_EQ(r.violation_count, 0u);
}

TEST(FunctionOrder, QuarticPairNeverCrosses) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = rrw::couple_function_order(F("quartic(1)"), F("quartic(2)"),
                                              UrnState::make(0.5, 2), 10000, rrw::Stream(2, s));
    ASSERT_EQ(r.violation_count, 0u);
    ASSERT_EQ(r.violations.size(), 10001u);
  }
}

TEST(FunctionOrder, OrderPrecondition) {
  EXPECT_EQ(kind_of([] {
              rrw::couple_function_order(F("linear(0.4)"), F("const(0.5)"),
                                         UrnState::make(0.5, 2), 10, rrw::Stream(1, 0));
            }),
            rrw::ErrorKind::PreconditionOrder);
}

TEST(OffCenter, CenteredStartIsIdentical) {
  const auto r = rrw::couple_off_center(F("quartic(2)"), 0.5, 2, 1000, rrw::Stream(1, 0));
  EXPECT_EQ(r.first.states, r.second.states);
}

TEST(OffCenter, NeverCrosses) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = rrw::couple_off_center(F("quartic(2)"), 0.75, 2, 10000, rrw::Stream(3, s));
    ASSERT_EQ(r.violation_count, 0u);
  }
}

TEST(OffCenter, Preconditions) {
  EXPECT_EQ(kind_of([] { rrw::couple_off_center(F("quartic(2)"), 0.6, 1, 10, rrw::Stream(1, 0)); }),
            rrw::ErrorKind::IntegralityViolation);
  EXPECT_EQ(kind_of([] { rrw::couple_off_center(F("linear(0.4)"), 0.75, 2, 10, rrw::Stream(1, 0)); }),
            rrw::ErrorKind::SymmetryViolation);
  EXPECT_EQ(kind_of([] { rrw::couple_off_center(F("quartic(2)"), 0.75, 0, 10, rrw::Stream(1, 0)); }),
            rrw::ErrorKind::InvalidParameter);
}

TEST(MassOrder, EqualMassesAreIdentical) {
  const auto r = rrw::couple_mass_order(F("quartic(2)"), 1.5, 1.5, 1000, rrw::Stream(1, 0));
  EXPECT_EQ(r.first.states, r.second.states);
}

// The urns live on different lattices, so a shared uniform can swap their
// distances to 1/2. Below 1/2 the farther urn steps toward 1/2 with the
// larger probability, which the mirror rule cannot prevent.
TEST(MassOrder, CanCrossBelowHalf) {
  const auto f = F("quartic(2)");
  const UrnState heavy{2, 6}, light{1, 4};  // (1/3, 6) and (1/4, 4)
  const double u = 0.495;
  const auto h = rrw::advance(heavy, rrw::mirror_draws_red(heavy.alpha(), f(heavy.alpha()), u));
  const auto l = rrw::advance(light, rrw::mirror_draws_red(light.alpha(), f(light.alpha()), u));
  EXPECT_LT(std::abs(heavy.alpha() - 0.5), std::abs(light.alpha() - 0.5));
  EXPECT_GT(std::abs(h.alpha() - 0.5), std::abs(l.alpha() - 0.5));
}

TEST(MassOrder, CrossingsStartBelowHalf) {
  std::size_t onsets = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto r = rrw::couple_mass_order(F("quartic(2)"), 1, 2, 10000, rrw::Stream(709, s));
    for (std::size_t n = 1; n < r.violations.size(); ++n) {
      if (!r.violations[n] || r.violations[n - 1]) continue;
      ++onsets;
      const bool both_above =
          r.first.states[n - 1].alpha() >= 0.5 && r.second.states[n - 1].alpha() >= 0.5;
      EXPECT_FALSE(both_above) << "stream " << s << " step " << n;
    }
  }
  EXPECT_GT(onsets, 0u);
}

TEST(MassOrder, Preconditions) {
  EXPECT_EQ(kind_of([] { rrw::couple_mass_order(F("quartic(2)"), 2, 1, 10, rrw::Stream(1, 0)); }),
            rrw::ErrorKind::PreconditionOrder);
  EXPECT_EQ(kind_of([] { rrw::couple_mass_order(F("mix"), 0, 1, 10, rrw::Stream(1, 0)); }),
            rrw::ErrorKind::PreconditionOrder);
}

TEST(Coupling, Deterministic) {
  const auto a = rrw::couple_off_center(F("mix"), 0.75, 2, 500, rrw::Stream(5, 5));
  const auto b = rrw::couple_off_center(F("mix"), 0.75, 2, 500, rrw::Stream(5, 5));
  EXPECT_EQ(a.first.states, b.first.states);
  EXPECT_EQ(a.second.states, b.second.states);
}

// Pathwise dominance carries over to the exact drift expectations.
TEST(Coupling, ExactDriftOrdering) {
  const auto f = F("quartic(2)");
  const std::size_t n = 1000;
  const double off = rrw::exact_drift_series(f, UrnState::make(0.75, 2), n).values[n];
  const double centered = rrw::exact_drift_series(f, UrnState::make(0.5, 2), n).values[n];
  const double heavy = rrw::exact_drift_series(f, UrnState::make(0.5, 4), n).values[n];
  EXPECT_GT(off, centered);
  EXPECT_LE(heavy, centered);
}

}  // namespace
