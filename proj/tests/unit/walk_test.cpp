#include <gtest/gtest.h>

#include <cmath>

#include "rrw/error.hpp"
#include "rrw/stats.hpp"
#include "rrw/walk.hpp"

namespace {

using rrw::EnvironmentSpec;
using rrw::ReinforcementFunction;
using rrw::UrnState;

ReinforcementFunction F(const char* s) { return ReinforcementFunction::parse(s); }

EnvironmentSpec flat() { return EnvironmentSpec::homogeneous(UrnState::make(0.5, 2)); }

rrw::StopRule horizon(std::uint64_t n) {
  rrw::StopRule s;
  s.kind = rrw::StopKind::Horizon;
  s.horizon = n;
  return s;
}

const char* const kFive[] = {"const(0.5)", "const(0.7)", "linear(0.4)", "quartic(2)", "mix"};

TEST(Simulate, HalfIsSimpleWalk) {
  const auto r = rrw::simulate_walk(F("const(0.5)"), flat(), horizon(100000), rrw::Stream(1, 0));
  const double mean = static_cast<double>(r.path.back()) / 100000.0;
  EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(1e5));
}

TEST(Simulate, BiasedWalkSpeed) {
  const auto r = rrw::simulate_walk(F("const(0.9)"), flat(), horizon(100000), rrw::Stream(1, 0));
  EXPECT_NEAR(static_cast<double>(r.path.back()) / 1e5, 0.8, 4 * 0.6 / std::sqrt(1e5));
}

TEST(Simulate, DeterministicAndNearestNeighbour) {
  const auto a = rrw::simulate_walk(F("mix"), flat(), horizon(5000), rrw::Stream(2, 3));
  const auto b = rrw::simulate_walk(F("mix"), flat(), horizon(5000), rrw::Stream(2, 3));
  EXPECT_EQ(a.path, b.path);
  for (std::size_t k = 1; k < a.path.size(); ++k) ASSERT_EQ(std::abs(a.path[k] - a.path[k - 1]), 1);
}

TEST(Simulate, SiteUrnsCountDepartures) {
  const auto r = rrw::simulate_walk(F("quartic(2)"), flat(), horizon(3000), rrw::Stream(4, 0));
  std::uint64_t total = 0;
  for (const auto& [x, l] : r.visits) {
    total += l;
    const auto urn = r.final_urns.at(x);
    EXPECT_DOUBLE_EQ(urn.l(), 2.0 + static_cast<double>(l));
  }
  EXPECT_EQ(total, 3000u);
}

TEST(Simulate, CapReached) {
  rrw::StopRule s;
  s.kind = rrw::StopKind::HitLevel;
  s.level = 1000;
  s.cap = 100;
  const auto r = rrw::simulate_walk(F("const(0.5)"), flat(), s, rrw::Stream(1, 0));
  EXPECT_EQ(r.status, rrw::WalkStatus::CapReached);
  EXPECT_EQ(r.steps(), 100u);
}

TEST(Simulate, HitLevelStops) {
  rrw::StopRule s;
  s.kind = rrw::StopKind::HitLevel;
  s.level = 3;
  const auto r = rrw::simulate_walk(F("const(0.7)"), flat(), s, rrw::Stream(1, 0));
  EXPECT_EQ(r.status, rrw::WalkStatus::Completed);
  EXPECT_EQ(r.path.back(), 3);
}

TEST(Functionals, PathwiseIdentity) {
  for (std::uint64_t id = 0; id < 200; ++id) {
    const auto f = F(kFive[id % 5]);
    const auto r = rrw::simulate_walk(f, flat(), horizon(2000), rrw::Stream(5, id));
    const auto w = rrw::walk_functionals(f, r);
    for (std::size_t k = 0; k < r.path.size(); ++k) {
      ASSERT_EQ(w.xplus[k], std::max<std::int64_t>(r.path[k], 0) -
                                static_cast<std::int64_t>(w.u[k]));
      ASSERT_DOUBLE_EQ(w.m[k], static_cast<double>(w.xplus[k]) - w.dplus[k]);
    }
  }
}

TEST(Functionals, LevelValues) {
  const auto f = F("const(0.75)");
  const auto r = rrw::simulate_walk(f, flat(), horizon(500), rrw::Stream(6, 0));
  const auto w = rrw::walk_functionals(f, r, 2);
  ASSERT_TRUE(w.t_a.has_value());
  EXPECT_EQ(r.path[*w.t_a], 2);
  EXPECT_EQ(w.u_ta, w.u[*w.t_a]);
  EXPECT_DOUBLE_EQ(w.dplus_ta, w.dplus[*w.t_a]);
}

TEST(Oracle, SimpleWalkTwoSteps) {
  const auto o = rrw::exact_walk_oracle(F("const(0.5)"), flat(), 2);
  EXPECT_DOUBLE_EQ(o.prob(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(o.prob(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(o.prob(2, -2), 0.25);
}

TEST(Oracle, FirstStep) {
  const auto o = rrw::exact_walk_oracle(F("quartic(2)"), flat(), 1);
  EXPECT_DOUBLE_EQ(o.prob(1, 1), 0.5);
}

TEST(Oracle, HorizonGuard) {
  try {
    rrw::exact_walk_oracle(F("mix"), flat(), 17);
    FAIL();
  } catch (const rrw::Error& e) {
    EXPECT_EQ(e.kind(), rrw::ErrorKind::HorizonTooLarge);
  }
}

TEST(Oracle, MartingaleExact) {
  EnvironmentSpec two_sided{UrnState::make(0.5, 1), UrnState::make(1.0 / 3, 1.5),
                            UrnState::make(2.0 / 3, 1.5)};
  for (const auto& env : {flat(), two_sided}) {
    for (const char* name : kFive) {
      const auto o = rrw::exact_walk_oracle(F(name), env, 12);
      for (std::size_t m = 0; m <= 12; ++m) {
        EXPECT_NEAR(o.total[m], 1.0, 1e-12) << name;
        EXPECT_LE(std::abs(o.m_plus[m]), 1e-10) << name << " m=" << m;
      }
    }
  }
}

TEST(Oracle, AgreesWithMonteCarlo) {
  const auto f = F("mix");
  const auto o = rrw::exact_walk_oracle(f, flat(), 10);
  const std::size_t reps = 40000;
  std::vector<double> at_two(reps), hit3(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto w = rrw::simulate_walk(f, flat(), horizon(10), rrw::Stream(7, r));
    at_two[r] = w.path.back() == 2 ? 1.0 : 0.0;
    hit3[r] = *std::max_element(w.path.begin(), w.path.end()) >= 3 ? 1.0 : 0.0;
  }
  const auto a = rrw::stats::mean_stderr(at_two);
  const auto h = rrw::stats::mean_stderr(hit3);
  EXPECT_LE(std::abs(a.mean - o.prob(10, 2)), 4 * a.std_error);
  EXPECT_LE(std::abs(h.mean - o.hit[2]), 4 * h.std_error);
}

TEST(Hitting, DriftEquation) {
  for (const char* name : {"const(0.5)", "const(0.75)", "quartic(2)"}) {
    const auto f = F(name);
    const std::size_t reps = 4000;
    std::vector<std::vector<double>> sums(3, std::vector<double>(reps));
    for (std::size_t r = 0; r < reps; ++r) {
      const auto hs = rrw::hitting_functionals(f, flat(), {1, 2, 3}, 10000000, rrw::Stream(8, r));
      for (int a = 0; a < 3; ++a) sums[a][r] = static_cast<double>(hs[a].u) + hs[a].dplus;
    }
    for (int a = 0; a < 3; ++a) {
      const auto e = rrw::stats::mean_stderr(sums[a]);
      EXPECT_LE(std::abs(e.mean - (a + 1)), 3 * e.std_error + 1e-12) << name << " a=" << a + 1;
    }
  }
}

TEST(Regime, BiasedWalkNeverReturns) {
  rrw::RegimeConfig cfg{20000, 1000, 200, 1};
  const auto e = rrw::empirical_regime(F("const(0.9)"), flat(), cfg);
  EXPECT_EQ(e.mean_returns, 0.0);
  EXPECT_EQ(e.return_fraction, 0.0);
}

// Arcsine law: P(no zero in (burn_in, n]) = (2/pi) asin(sqrt(burn_in/n)), so the
// return fraction of the simple walk is about 0.936 at the default burn-in ratio.
TEST(Regime, SimpleWalkReturnFraction) {
  rrw::RegimeConfig cfg{100000, 1000, 500, 1};
  const auto e = rrw::empirical_regime(F("const(0.5)"), flat(), cfg);
  const double expect = 1.0 - 2.0 / M_PI * std::asin(0.1);
  EXPECT_NEAR(e.return_fraction, expect, 4 * std::sqrt(expect * (1 - expect) / 500));
}

}  // namespace
