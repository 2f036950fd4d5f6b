#include "rrw/coupling.hpp"

#include <cmath>
#include <functional>

#include "rrw/error.hpp"

namespace rrw {

namespace {

constexpr double kExactTol = 1e-9;

using Rule = std::function<bool(UrnState, double)>;
using Check = std::function<bool(UrnState, UrnState)>;

CoupledRun run_pair(CouplingKind kind, UrnState a, UrnState b, std::size_t n,
                    Stream& stream, const Rule& rule_a, const Rule& rule_b,
                    const Check& dominated) {
  CoupledRun run;
  run.kind = kind;
  for (UrnTrajectory* t : {&run.first, &run.second}) {
    t->seed = stream.seed();
    t->stream_id = stream.stream_id();
    t->draws.reserve(n);
    t->states.reserve(n + 1);
  }
  run.first.initial = a;
  run.second.initial = b;
  run.violations.reserve(n + 1);
  auto record = [&] {
    run.first.states.push_back(a);
    run.second.states.push_back(b);
    const bool bad = !dominated(a, b);
    run.violations.push_back(bad ? 1 : 0);
    run.violation_count += bad;
  };
  record();
  for (std::size_t i = 0; i < n; ++i) {
    const double u = stream.uniform();
    const bool ra = rule_a(a, u);
    const bool rb = rule_b(b, u);
    run.first.draws.push_back(ra ? Draw::Red : Draw::Blue);
    run.second.draws.push_back(rb ? Draw::Red : Draw::Blue);
    a = advance(a, ra);
    b = advance(b, rb);
    record();
  }
  return run;
}

// |red/mass - 1/2| scaled by 2 * mass.
double offset(UrnState s) { return std::abs(2.0 * s.red - s.mass); }

void require_symmetric(const ReinforcementFunction& f) {
  if (!is_symmetric(f, 1e-10))
    throw Error(ErrorKind::SymmetryViolation,
                "f(1/2 - t) != f(1/2 + t) on the grid for " + f.source());
}

Rule mirror_rule(const ReinforcementFunction& f) {
  return [f](UrnState s, double u) {
    const double x = s.alpha();
    return mirror_draws_red(x, f(x), u);
  };
}

}  // namespace

std::string_view coupling_kind_name(CouplingKind k) {
  switch (k) {
    case CouplingKind::FunctionOrder: return "function-order";
    case CouplingKind::OffCenter: return "off-center";
    case CouplingKind::MassOrder: return "mass-order";
  }
  return "function-order";
}

CoupledRun couple_function_order(const ReinforcementFunction& f,
                                 const ReinforcementFunction& g, UrnState init,
                                 std::size_t n, Stream stream) {
  const double x = first_order_violation(f, g);
  if (x >= 0.0)
    throw Error(ErrorKind::PreconditionOrder,
                "f <= g fails at x = " + std::to_string(x));
  return run_pair(
      CouplingKind::FunctionOrder, init, init, n, stream,
      [f](UrnState s, double u) { return draws_red(f(s.alpha()), u); },
      [g](UrnState s, double u) { return draws_red(g(s.alpha()), u); },
      // Equal masses, so compare red masses directly.
      [](UrnState a, UrnState b) { return a.red <= b.red + kExactTol; });
}

CoupledRun couple_off_center(const ReinforcementFunction& f, double alpha, double l,
                             std::size_t n, Stream stream) {
  if (!(l > 0.0)) throw Error(ErrorKind::InvalidParameter, "mass l must be > 0");
  const double gap = 2.0 * alpha * l - l;
  if (!(gap >= -1e-10) || std::abs(gap - std::round(gap)) > 1e-10)
    throw Error(ErrorKind::IntegralityViolation,
                "2*alpha*l - l = " + std::to_string(gap) + " is not a nonnegative integer");
  require_symmetric(f);
  const auto a = UrnState::make(alpha, 2.0 * l);
  const auto b = UrnState::make(0.5, 2.0 * l);
  const auto rule = mirror_rule(f);
  return run_pair(CouplingKind::OffCenter, a, b, n, stream, rule, rule,
                  [](UrnState x, UrnState y) {
                    const double diff = x.red - y.red;
                    return offset(y) <= offset(x) + kExactTol &&
                           std::abs(diff - std::round(diff)) <= kExactTol;
                  });
}

CoupledRun couple_mass_order(const ReinforcementFunction& f, double l0, double l1,
                             std::size_t n, Stream stream) {
  if (!(l0 > 0.0) || !(l0 <= l1) || !std::isfinite(l1))
    throw Error(ErrorKind::PreconditionOrder, "mass coupling needs 0 < l0 <= l1");
  require_symmetric(f);
  const auto a = UrnState::make(0.5, 2.0 * l1);
  const auto b = UrnState::make(0.5, 2.0 * l0);
  const auto rule = mirror_rule(f);
  return run_pair(CouplingKind::MassOrder, a, b, n, stream, rule, rule,
                  [](UrnState x, UrnState y) {
                    // |x - 1/2| <= |y - 1/2| after clearing denominators.
                    return offset(x) * y.mass <= offset(y) * x.mass + kExactTol;
                  });
}

}  // namespace rrw
