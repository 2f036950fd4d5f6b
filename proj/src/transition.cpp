#include "rrw/transition.hpp"

#include <algorithm>
#include <cmath>

#include "rrw/error.hpp"

namespace rrw {

std::string_view axis_name(Axis a) { return a == Axis::U ? "u" : "l"; }

std::string_view threshold_status_name(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Bracketed: return "Bracketed";
    case ThresholdStatus::NoCrossing: return "NoCrossing";
    case ThresholdStatus::BudgetExhausted: return "BudgetExhausted";
    case ThresholdStatus::MonotonicityViolation: return "MonotonicityViolation";
  }
  return "BudgetExhausted";
}

DriftEstimate evaluate_axis(const ReinforcementFunction& base, Axis axis, double param,
                            double other, const DriftConfig& config) {
  const double u = axis == Axis::U ? param : other;
  const double l = axis == Axis::U ? other : param;
  if (!(l > 0.0)) throw Error(ErrorKind::InvalidParameter, "mass l must be > 0");
  const auto f = u == 1.0 ? base : make_family(base, u);
  return estimate_delta_inf(f, UrnState::make(0.5, 2.0 * l), config);
}

namespace {

// Combined standard error, treating infinite values as exact.
double combined(const DriftEstimate& a, const DriftEstimate& b) {
  auto se = [](const DriftEstimate& e) { return std::isfinite(e.std_error) ? e.std_error : 0.0; };
  return std::hypot(se(a), se(b));
}

// True when b < a beyond 3 combined standard errors (b should not be below a).
bool drops(const DriftEstimate& a, const DriftEstimate& b) {
  if (std::isnan(a.mean) || std::isnan(b.mean)) return false;
  if (std::isinf(a.mean) || std::isinf(b.mean)) return b.mean < a.mean;
  return b.mean < a.mean - 3.0 * combined(a, b);
}

int side_of(const DriftEstimate& e, double target, double z) {
  if (std::isnan(e.mean)) return 0;
  if (std::isinf(e.mean)) return e.mean > 0 ? 1 : -1;
  if (!std::isfinite(e.std_error)) return 0;
  if (e.ci_low(z) > target) return 1;
  if (e.ci_high(z) < target) return -1;
  return 0;
}

class Bisector {
 public:
  Bisector(const ReinforcementFunction& base, const ThresholdConfig& c, ThresholdResult& out)
      : base_(base), c_(c), out_(out) {}

  // Escalates replicas until the side is decided, Monte Carlo noise no
  // longer dominates, or the caps are reached.
  Evaluation evaluate(double param) {
    DriftConfig dc{c_.n_dp, c_.n_mc, c_.replicas, c_.seed, 0};
    for (;;) {
      if (out_.log.size() >= c_.max_evaluations) throw Error(ErrorKind::BudgetExhausted, "evaluation budget spent");
      Evaluation ev{param, evaluate_axis(base_, c_.axis, param, c_.other, dc), 0};
      ev.side = side_of(ev.estimate, c_.target, c_.z);
      out_.log.push_back(ev);
      const bool noisy = ev.estimate.mc_std_error > ev.estimate.tail_error;
      if (ev.side != 0 || !noisy || dc.replicas * 2 > c_.max_replicas) return ev;
      dc.replicas *= 2;
    }
  }

 private:
  const ReinforcementFunction& base_;
  const ThresholdConfig& c_;
  ThresholdResult& out_;
};

}  // namespace

ThresholdResult find_threshold(const ReinforcementFunction& base, const ThresholdConfig& c) {
  if (!(c.lo > 0.0) || !(c.lo < c.hi))
    throw Error(ErrorKind::InvalidParameter, "threshold range needs 0 < lo < hi");
  ThresholdResult res;
  res.axis = c.axis;
  res.lo = c.lo;
  res.hi = c.hi;
  Bisector bis(base, c, res);
  try {
    res.est_lo = bis.evaluate(c.lo);
    res.est_hi = bis.evaluate(c.hi);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    res.status = ThresholdStatus::BudgetExhausted;
    res.detail = e.what();
    return res;
  }
  if (res.est_lo.side == 0 || res.est_hi.side == 0) {
    res.status = ThresholdStatus::BudgetExhausted;
    res.detail = "range endpoint undecided at the replica cap";
    return res;
  }
  if (res.est_lo.side == res.est_hi.side) {
    res.status = ThresholdStatus::NoCrossing;
    res.detail = res.est_lo.side > 0 ? "both ends above the target" : "both ends below the target";
    return res;
  }
  const int expected_lo = c.axis == Axis::U ? -1 : 1;
  if (res.est_lo.side != expected_lo) {
    res.status = ThresholdStatus::MonotonicityViolation;
    res.detail = "range ends are ordered against the expected monotonicity";
    return res;
  }

  try {
    while (res.hi - res.lo > c.rel_width * 0.5 * (res.lo + res.hi)) {
      // Geometric midpoint first, then the thirds when it stays undecided.
      bool moved = false;
      for (double w : {0.5, 1.0 / 3.0, 2.0 / 3.0}) {
        const double p = res.lo * std::pow(res.hi / res.lo, w);
        const Evaluation ev = bis.evaluate(p);
        const bool up = c.axis == Axis::U;
        const auto& a = up ? res.est_lo.estimate : ev.estimate;
        const auto& b = up ? ev.estimate : res.est_lo.estimate;
        const auto& a2 = up ? ev.estimate : res.est_hi.estimate;
        const auto& b2 = up ? res.est_hi.estimate : ev.estimate;
        if (drops(a, b) || drops(a2, b2)) {
          res.status = ThresholdStatus::MonotonicityViolation;
          res.detail = "estimate at " + std::to_string(p) + " breaks monotonicity";
          return res;
        }
        if (ev.side == 0) continue;
        if (ev.side == res.est_lo.side) {
          res.lo = p;
          res.est_lo = ev;
        } else {
          res.hi = p;
          res.est_hi = ev;
        }
        moved = true;
        break;
      }
      if (!moved) {
        res.status = ThresholdStatus::BudgetExhausted;
        res.detail = "no interior point could be placed on either side";
        return res;
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    res.status = ThresholdStatus::BudgetExhausted;
    res.detail = e.what();
    return res;
  }
  res.status = ThresholdStatus::Bracketed;
  return res;
}

SweepResult sweep(const ReinforcementFunction& base, Axis axis, const std::vector<double>& grid,
                  double other, const DriftConfig& config) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw Error(ErrorKind::InvalidParameter, "sweep grid must be sorted");
  SweepResult out;
  out.axis = axis;
  for (double p : grid) out.rows.push_back({p, evaluate_axis(base, axis, p, other, config)});
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    const auto& a = out.rows[i].estimate;
    const auto& b = out.rows[i + 1].estimate;
    if (axis == Axis::U ? drops(a, b) : drops(b, a)) out.flags.push_back(i);
  }
  return out;
}

}  // namespace rrw
