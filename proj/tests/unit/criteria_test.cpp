#include <gtest/gtest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <fstream>

#include "rrw/criteria.hpp"
#include "rrw/error.hpp"

namespace {

using rrw::ReinforcementFunction;
using rrw::UrnState;
using rrw::Verdict;

ReinforcementFunction F(const char* s) { return ReinforcementFunction::parse(s); }

rrw::EnvironmentSpec flat() { return rrw::EnvironmentSpec::homogeneous(UrnState::make(0.5, 2)); }

rrw::ClassifyBudget small_budget() {
  rrw::ClassifyBudget b;
  b.drift = {2000, 0, 0, 1, 0};
  b.solomon_replicas = 200;
  b.solomon_horizon = 2000;
  return b;
}

TEST(Mapping, DirectedUnitWeights) {
  const auto env = rrw::map_classical_weights({rrw::WeightMode::Directed, 1, 1, 1, 1});
  for (std::int64_t x : {-3, 0, 5}) {
    EXPECT_DOUBLE_EQ(env.at(x).alpha(), 0.5);
    EXPECT_DOUBLE_EQ(env.at(x).l(), 2.0);
  }
}

TEST(Mapping, UndirectedUnitWeights) {
  const auto env = rrw::map_classical_weights({rrw::WeightMode::Undirected, 1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(env.w0.alpha(), 0.5);
  EXPECT_DOUBLE_EQ(env.w0.l(), 1.0);
  EXPECT_DOUBLE_EQ(env.at(1).alpha(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(env.at(1).l(), 1.5);
  EXPECT_DOUBLE_EQ(env.at(-4).alpha(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(env.at(-4).l(), 1.5);
}

TEST(Mapping, RejectsZeroIncrement) {
  EXPECT_THROW(rrw::map_classical_weights({rrw::WeightMode::Directed, 1, 1, 1, 0}), rrw::Error);
  EXPECT_THROW(rrw::map_classical_weights({rrw::WeightMode::Undirected, 1, 1, -1, 1}), rrw::Error);
}

TEST(Classify, ConstantHalfRecurrent) {
  const auto v = rrw::classify(F("const(0.5)"), flat(), small_budget());
  EXPECT_EQ(v.verdict, Verdict::Recurrent);
  EXPECT_EQ(v.rule, "drift-criterion");
  ASSERT_TRUE(v.delta1.has_value());
  EXPECT_EQ(v.delta1->mean, 0.0);
}

TEST(Classify, OffCenterFixedPointTransient) {
  const auto v = rrw::classify(F("const(0.7)"), flat(), small_budget());
  EXPECT_EQ(v.verdict, Verdict::Transient);
  EXPECT_EQ(v.rule, "unique-fixed-point-off-half");
}

TEST(Classify, MixTransient) {
  const auto v = rrw::classify(F("mix"), flat(), small_budget());
  EXPECT_EQ(v.verdict, Verdict::Transient);
  EXPECT_EQ(v.rule, "curvature-corollary");
}

TEST(Classify, LinearInconclusiveWithAudit) {
  const auto v = rrw::classify(F("linear(0.4)"), flat(), small_budget());
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
  bool some_failed = false;
  for (const auto& a : v.audit) some_failed |= !a.ok;
  EXPECT_TRUE(some_failed);
  EXPECT_FALSE(v.audit.empty());
}

TEST(Classify, Deterministic) {
  auto b = small_budget();
  b.drift = {2000, 6000, 64, 3, 0};
  const auto a = rrw::classify(F("quartic(2)"), flat(), b);
  const auto c = rrw::classify(F("quartic(2)"), flat(), b);
  ASSERT_TRUE(a.delta1 && c.delta1);
  EXPECT_EQ(a.delta1->mean, c.delta1->mean);
  EXPECT_EQ(a.verdict, c.verdict);
}

TEST(Classify, VerdictMonotoneInScale) {
  // Once the family is transient it stays transient as u grows.
  const auto base = F("quartic(2)");
  bool transient = false;
  for (double u : {0.5, 1.0, 2.0, 8.0, 16.0}) {
    const auto v = rrw::classify(rrw::make_family(base, u), flat(), small_budget());
    if (transient) EXPECT_EQ(v.verdict, Verdict::Transient) << u;
    transient = v.verdict == Verdict::Transient;
  }
  EXPECT_TRUE(transient);
}

TEST(Rules, MatchSnapshot) {
  std::ifstream in(std::string(RRW_FIXTURES_DIR) + "/classification_rules.txt");
  ASSERT_TRUE(in.good());
  std::vector<std::string> expected;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) expected.push_back(line);
  std::vector<std::string> actual;
  for (const auto& r : rrw::classification_rules())
    for (const auto& h : r.hypotheses) actual.push_back(r.rule + " | " + h);
  EXPECT_EQ(actual, expected);
}

TEST(Solomon, SymmetricStart) {
  const auto r = rrw::solomon_check(F("polya"), UrnState::make(0.5, 4), {500, 2000, 1, 1e-12});
  EXPECT_EQ(r.criterion, 0.0);
  EXPECT_EQ(r.verdict, Verdict::Recurrent);
  EXPECT_LE(std::abs(r.mc.mean), 3 * r.mc.std_error);
}

TEST(Solomon, BetaThreeTwo) {
  const auto r = rrw::solomon_check(F("polya"), UrnState::make(0.6, 5), {500, 2000, 1, 1e-12});
  EXPECT_DOUBLE_EQ(r.a, 3.0);
  EXPECT_DOUBLE_EQ(r.b, 2.0);
  EXPECT_NEAR(r.criterion, 0.5, 1e-14);
  EXPECT_EQ(r.verdict, Verdict::Transient);
  EXPECT_EQ(r.direction, 1);
}

// Quadrature of the log-odds against the Beta density as an independent oracle.
TEST(Solomon, DigammaMatchesQuadrature) {
  boost::math::quadrature::tanh_sinh<double> q;
  for (auto [a, l] : std::vector<std::pair<double, double>>{
           {0.6, 5}, {0.5, 3}, {0.3, 2}, {0.75, 8}, {0.2, 1.5}}) {
    const auto r = rrw::solomon_check(F("x"), UrnState::make(a, l), {0, 0, 1, 1e-12});
    const boost::math::beta_distribution<double> beta(r.a, r.b);
    const double integral = q.integrate(
        [&](double x) { return std::log(x / (1 - x)) * boost::math::pdf(beta, x); }, 0.0, 1.0);
    EXPECT_NEAR(r.criterion, integral, 1e-9) << a << "," << l;
  }
}

TEST(Solomon, NotLinear) {
  try {
    rrw::solomon_check(F("quartic(2)"), UrnState::make(0.5, 2));
    FAIL();
  } catch (const rrw::Error& e) {
    EXPECT_EQ(e.kind(), rrw::ErrorKind::NotLinear);
  }
}

}  // namespace
