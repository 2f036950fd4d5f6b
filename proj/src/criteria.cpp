#include "rrw/criteria.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>

#include "rrw/error.hpp"
#include "rrw/parallel.hpp"

namespace rrw {

EnvironmentSpec map_classical_weights(const ClassicalWeights& w) {
  if (!(w.delta > 0.0)) throw Error(ErrorKind::InvalidParameter, "reinforcement increment must be > 0");
  if (w.mode == WeightMode::Directed) {
    if (!(w.a_left > 0.0) || !(w.a_right > 0.0))
      throw Error(ErrorKind::InvalidParameter, "directed weights must be > 0");
    const double sum = w.a_left + w.a_right;
    const auto s = UrnState::make(w.a_right / sum, sum / w.delta);
    return {s, s, s};
  }
  if (!(w.b0 > 0.0)) throw Error(ErrorKind::InvalidParameter, "undirected weight must be > 0");
  const double m = 2.0 * w.b0 + w.delta;
  return {UrnState::make(0.5, w.b0 / w.delta), UrnState::make(w.b0 / m, m / (2.0 * w.delta)),
          UrnState::make((w.b0 + w.delta) / m, m / (2.0 * w.delta))};
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Recurrent: return "Recurrent";
    case Verdict::Transient: return "Transient";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

const char* kTwoSided = "initial urns agree at every x >= 1 and at every x <= -1";
const char* kRightSide = "initial urns agree at every x >= 1";
const char* kIsolated = "fixed points of f are isolated";

bool near_half(double p) { return std::abs(p - 0.5) <= 1e-9; }

}  // namespace

const std::vector<RuleSpec>& classification_rules() {
  static const std::vector<RuleSpec> rules = {
      {"unique-fixed-point-off-half",
       {kTwoSided, kIsolated, "f has exactly one fixed point p", "p != 1/2"}},
      {"drift-criterion",
       {kRightSide, "f >= 1/2 on [0,1]",
        "recurrent iff E[delta^1_inf] <= 1, decided by a 99% interval"}},
      {"curvature-corollary",
       {kTwoSided, kIsolated, "1/2 is the only fixed point of f", "f'(1/2) = 0",
        "f''(1/2) != 0"}},
      {"two-sided-drift-bound",
       {kTwoSided, kIsolated, "1/2 is the only fixed point of f", "f'(1/2) = 0",
        "E[delta^1_inf] > 1 or E[delta^-1_inf] < -1 beyond the 99% margin"}},
      {"order-corollary",
       {kTwoSided, kIsolated, "f >= 1/2 on [1/2,1]", "every fixed point of f is >= 1/2",
        "1/2 is not a fixed point, or it is one of several and f'(1/2) = 0"}},
      {"solomon",
       {"f(x) = x", "initial urns agree at every x != 0"}},
  };
  return rules;
}

ClassificationVerdict classify(const ReinforcementFunction& f, const EnvironmentSpec& env,
                               const ClassifyBudget& budget) {
  ClassificationVerdict v;
  try {
    v.report = analyze(f);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonIsolatedFixedPoints) throw;
  }
  const auto& rules = classification_rules();
  const bool hyp2 = env.hypothesis2();
  const bool isolated = v.report.has_value();
  const FixedPointReport empty;
  const FixedPointReport& r = isolated ? *v.report : empty;
  const bool unique = isolated && r.unique;
  const bool unique_half = unique && near_half(r.points.front().p);
  const double tol = 1e-9;

  auto audit = [&](std::size_t idx, const std::vector<bool>& oks) {
    bool all = true;
    for (std::size_t i = 0; i < oks.size(); ++i) {
      v.audit.push_back({rules[idx].rule, rules[idx].hypotheses[i], oks[i]});
      all = all && oks[i];
    }
    return all;
  };
  auto decide = [&](std::size_t idx, Verdict verdict, std::string detail) {
    v.verdict = verdict;
    v.rule = rules[idx].rule;
    v.detail = std::move(detail);
    return v;
  };
  auto drift_at = [&](UrnState init) {
    return estimate_delta_inf(f, init, budget.drift, v.report);
  };

  // Unique fixed point away from 1/2.
  {
    const bool off = unique && !near_half(r.points.front().p);
    if (audit(0, {hyp2, isolated, unique, off}))
      return decide(0, Verdict::Transient, "the urns converge to p != 1/2");
  }

  // f >= 1/2: recurrence iff E[delta^1] <= 1.
  {
    const bool ge = isolated && r.ge_half;
    if (ge) v.delta1 = drift_at(env.w_plus);
    bool decided = false;
    Verdict verdict = Verdict::Inconclusive;
    std::string detail;
    if (ge) {
      const auto& d = *v.delta1;
      if (d.regime == Regime::DivergentPlus) {
        decided = true;
        verdict = Verdict::Transient;
        detail = "E[delta^1_inf] = +inf (" + d.reason + ")";
      } else if (d.regime == Regime::ConvergentFinite && std::isfinite(d.std_error)) {
        if (d.ci_high(budget.z) <= 1.0) {
          decided = true;
          verdict = Verdict::Recurrent;
          detail = "99% interval for E[delta^1_inf] lies at or below 1";
        } else if (d.ci_low(budget.z) > 1.0) {
          decided = true;
          verdict = Verdict::Transient;
          detail = "99% interval for E[delta^1_inf] lies above 1";
        } else {
          detail = "99% interval for E[delta^1_inf] contains 1";
        }
      }
    }
    if (audit(1, {true, ge, decided})) return decide(1, verdict, detail);
    if (ge) {
      v.rule = rules[1].rule;
      v.detail = detail;
      return v;  // the only criterion for f >= 1/2 is undecided
    }
  }

  // 1/2 the only fixed point, f'(1/2) = 0, f''(1/2) != 0.
  const bool flat = unique_half && std::abs(r.fprime_half) <= tol;
  {
    const bool curved = flat && std::abs(r.fsecond_half) > tol;
    if (audit(2, {hyp2, isolated, unique_half, flat, curved}))
      return decide(2, Verdict::Transient,
                    r.fsecond_half > 0 ? "delta^1_inf = +inf almost surely"
                                       : "delta^-1_inf = -inf almost surely");
  }

  // 1/2 the only fixed point, f'(1/2) = 0: sufficient drift bound.
  {
    bool fired = false;
    if (hyp2 && flat) {
      v.delta1 = drift_at(env.w_plus);
      v.delta_minus1 = drift_at(*env.w_minus);
      const auto& d1 = *v.delta1;
      const auto& dm = *v.delta_minus1;
      const bool right = d1.regime == Regime::ConvergentFinite
                             ? d1.ci_low(budget.z) > 1.0
                             : d1.regime == Regime::DivergentPlus;
      const bool left = dm.regime == Regime::ConvergentFinite
                            ? dm.ci_high(budget.z) < -1.0
                            : dm.regime == Regime::DivergentMinus;
      fired = right || left;
    }
    if (audit(3, {hyp2, isolated, unique_half, flat, fired}))
      return decide(3, Verdict::Transient, "drift bound exceeds 1 beyond the margin");
  }

  // Order corollary via the monotone coupling.
  {
    bool right_ok = isolated && r.ge_half_right;
    bool all_above = isolated;
    for (const auto& fp : r.points) all_above = all_above && fp.p >= 0.5 - 1e-9;
    const bool half_fp = isolated && r.has_fixed_point_at_half();
    const bool shape = isolated && (!half_fp || (!r.unique && std::abs(r.fprime_half) <= tol));
    if (audit(4, {hyp2, isolated, right_ok, all_above, shape}))
      return decide(4, Verdict::Transient, "a comparison urn below f keeps the negative drift finite");
  }

  // Identity: Solomon's criterion.
  {
    const bool identity = is_identity(f);
    const bool homogeneous = !env.w_minus || *env.w_minus == env.w_plus;
    if (audit(5, {identity, homogeneous})) {
      SolomonConfig sc;
      sc.replicas = budget.solomon_replicas;
      sc.horizon = budget.solomon_horizon;
      sc.seed = budget.drift.seed;
      v.solomon = solomon_check(f, env.w_plus, sc);
      return decide(5, v.solomon->verdict,
                    v.solomon->verdict == Verdict::Recurrent
                        ? "E[ln(alpha/(1-alpha))] = 0"
                        : "E[ln(alpha/(1-alpha))] != 0");
    }
  }

  v.verdict = Verdict::Inconclusive;
  v.rule = "none";
  v.detail = "no rule has all of its hypotheses satisfied";
  return v;
}

SolomonReport solomon_check(const ReinforcementFunction& f, UrnState init,
                            const SolomonConfig& config) {
  if (!is_identity(f))
    throw Error(ErrorKind::NotLinear, "the criterion needs f(x) = x, got " + f.source());
  SolomonReport rep;
  rep.a = init.red;
  rep.b = init.mass - init.red;
  if (!(rep.a > 0.0) || !(rep.b > 0.0))
    throw Error(ErrorKind::InvalidParameter, "the limit law needs 0 < alpha0 < 1");
  rep.criterion = boost::math::digamma(rep.a) - boost::math::digamma(rep.b);
  rep.horizon = config.horizon;
  if (std::abs(rep.criterion) <= config.tolerance) {
    rep.verdict = Verdict::Recurrent;
  } else {
    rep.verdict = Verdict::Transient;
    rep.direction = rep.criterion > 0 ? 1 : -1;
  }
  const auto logits = parallel_map<double>(config.replicas, [&](std::size_t r) {
    Stream stream(config.seed, r);
    const double a = run_urn(f, init, config.horizon, stream).alpha();
    return std::log(a / (1.0 - a));
  });
  rep.mc = stats::mean_stderr(logits);
  return rep;
}

}  // namespace rrw
