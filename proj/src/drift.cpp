#include "rrw/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrw/error.hpp"
#include "rrw/parallel.hpp"

namespace rrw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct DriftSums {
  double delta = 0.0;
  double pos = 0.0;
  double neg = 0.0;

  void add(double fv) {
    const double d = 2.0 * fv - 1.0;
    delta += d;
    if (d > 0.0)
      pos += d;
    else
      neg -= d;
  }
};

// Exact E[delta_m], E[delta_m^+], E[delta_m^-] at the requested m (sorted),
// plus the final DP row.
struct ExactCheckpoints {
  std::vector<double> delta, pos, neg;
  std::vector<double> last_row;
};

ExactCheckpoints exact_checkpoints(const ReinforcementFunction& f, UrnState init,
                                   std::size_t horizon,
                                   const std::vector<std::size_t>& at) {
  ExactCheckpoints out;
  DriftSums sums;
  std::size_t next = 0;
  for_each_exact_row(f, init, horizon,
                     [&](std::size_t n, std::span<const double> row,
                         std::span<const double> fv) {
                       double d = 0.0, p = 0.0, m = 0.0;
                       for (std::size_t k = 0; k < row.size(); ++k) {
                         const double inc = 2.0 * fv[k] - 1.0;
                         d += row[k] * inc;
                         if (inc > 0.0)
                           p += row[k] * inc;
                         else
                           m -= row[k] * inc;
                       }
                       sums.delta += d;
                       sums.pos += p;
                       sums.neg += m;
                       while (next < at.size() && at[next] == n) {
                         out.delta.push_back(sums.delta);
                         out.pos.push_back(sums.pos);
                         out.neg.push_back(sums.neg);
                         ++next;
                       }
                       if (n == horizon) out.last_row.assign(row.begin(), row.end());
                     });
  return out;
}

std::vector<double> as_doubles(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ys[i] > 0.0 && ns[i] > 0.0) {
      lx.push_back(std::log(ns[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  if (lx.size() < 2) return kNaN;
  return stats::fit_line(lx, ly).slope;
}

std::size_t sample_index(std::span<const double> row, double u) {
  double acc = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    acc += row[k];
    if (u < acc) return k;
  }
  return row.size() - 1;
}

}  // namespace

DriftSeries drift_series(const ReinforcementFunction& f, UrnState init,
                         std::size_t n, Stream stream) {
  DriftSeries out;
  out.values.reserve(n + 1);
  out.pos.reserve(n + 1);
  out.neg.reserve(n + 1);
  DriftSums sums;
  UrnState s = init;
  double fv = f(s.alpha());
  for (std::size_t m = 0;; ++m) {
    sums.add(fv);
    out.values.push_back(sums.delta);
    out.pos.push_back(sums.pos);
    out.neg.push_back(sums.neg);
    if (m == n) break;
    s = advance(s, draws_red(fv, stream.uniform()));
    fv = f(s.alpha());
  }
  return out;
}

DriftSeries exact_drift_series(const ReinforcementFunction& f, UrnState init,
                               std::size_t n) {
  std::vector<std::size_t> all(n + 1);
  for (std::size_t i = 0; i <= n; ++i) all[i] = i;
  auto cp = exact_checkpoints(f, init, n, all);
  return {std::move(cp.delta), std::move(cp.pos), std::move(cp.neg)};
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::ConvergentFinite: return "ConvergentFinite";
    case Regime::DivergentPlus: return "DivergentPlus";
    case Regime::DivergentMinus: return "DivergentMinus";
    case Regime::PartsInfinite: return "PartsInfinite";
    case Regime::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view method_name(DriftMethod m) {
  switch (m) {
    case DriftMethod::Dp: return "dp";
    case DriftMethod::Mc: return "mc";
    case DriftMethod::DpTail: return "dp+tail";
    case DriftMethod::DpMcTail: return "dp+mc+tail";
  }
  return "dp";
}

RegimeDecision decide_regime(const FixedPointReport& r, double tol) {
  const bool le_half = r.max_value <= 0.5 + 1e-12;
  if (r.ge_half && le_half) return {Regime::ConvergentFinite, "f is identically 1/2"};
  if (r.ge_half || le_half) {
    const Regime away = r.ge_half ? Regime::DivergentPlus : Regime::DivergentMinus;
    if (!r.stable_away_from_half().empty())
      return {away, "stable fixed point away from 1/2"};
    const double curvature = r.ge_half ? r.fsecond_half : -r.fsecond_half;
    if (curvature > tol) return {away, "f''(1/2) != 0 pushes the drift to one side"};
    return {Regime::ConvergentFinite, "f'(1/2) = f''(1/2) = 0 with 1/2 the only stable point"};
  }
  if (r.unique) {
    const FixedPoint& fp = r.points.front();
    if (fp.p > 0.5 + 1e-9) return {Regime::DivergentPlus, "unique fixed point above 1/2"};
    if (fp.p < 0.5 - 1e-9) return {Regime::DivergentMinus, "unique fixed point below 1/2"};
    if (std::abs(r.fprime_half) > tol)
      return {Regime::PartsInfinite, "f'(1/2) != 0"};
    if (r.fsecond_half > tol) return {Regime::DivergentPlus, "f'(1/2) = 0, f''(1/2) > 0"};
    if (r.fsecond_half < -tol) return {Regime::DivergentMinus, "f'(1/2) = 0, f''(1/2) < 0"};
    return {Regime::ConvergentFinite, "f'(1/2) = f''(1/2) = 0"};
  }
  return {Regime::Unknown, "several fixed points and no applicable result"};
}

TailFit fit_tail(std::span<const double> ns, std::span<const double> values) {
  TailFit out;
  out.exponent = kNaN;
  if (ns.size() < 2) {
    out.limit = values.empty() ? 0.0 : values.back();
    return out;
  }
  std::vector<double> x(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) x[i] = 1.0 / std::sqrt(ns[i]);
  const auto line = stats::fit_line(x, values);
  out.limit = line.intercept;
  out.coefficient = -line.slope;

  // Free exponent from the local slopes dE/dN ~ N^-(beta+1).
  std::vector<double> lx, ly;
  int sign = 0;
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    const double d = values[i + 1] - values[i];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) return out;
    sign = s;
    lx.push_back(0.5 * (std::log(ns[i]) + std::log(ns[i + 1])));
    ly.push_back(std::log(std::abs(d) / (ns[i + 1] - ns[i])));
  }
  if (lx.size() >= 2) out.exponent = -stats::fit_line(lx, ly).slope - 1.0;
  return out;
}

DriftEstimate estimate_delta_inf(const ReinforcementFunction& f, UrnState init,
                                 const DriftConfig& config) {
  std::optional<FixedPointReport> report;
  try {
    report = analyze(f);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonIsolatedFixedPoints) throw;
  }
  return estimate_delta_inf(f, init, config, report);
}

DriftEstimate estimate_delta_inf(const ReinforcementFunction& f, UrnState init,
                                 const DriftConfig& config,
                                 const std::optional<FixedPointReport>& report) {
  DriftEstimate est;
  const std::size_t n_dp = config.n_dp;
  if (n_dp == 0) throw Error(ErrorKind::InvalidParameter, "n_dp must be >= 1");
  if (n_dp > kDefaultMaxHorizon * 10)
    throw Error(ErrorKind::HorizonTooLarge, "n_dp too large for the exact drift");
  est.truncation = n_dp;
  est.fitted_exponent = kNaN;

  if (report) {
    const auto d = decide_regime(*report);
    est.regime = d.regime;
    est.reason = d.reason;
  } else {
    est.regime = Regime::Unknown;
    est.reason = "fixed points are not isolated";
  }

  const std::size_t first = std::max<std::size_t>(1, n_dp / 100);
  std::vector<std::size_t> at = stats::geometric_checkpoints(first, std::max(first, n_dp), 21);
  const auto cp = exact_checkpoints(f, init, n_dp, at);
  est.dp_value = cp.delta.back();
  const auto ns = as_doubles(at);

  switch (est.regime) {
    case Regime::DivergentPlus:
    case Regime::DivergentMinus: {
      const bool plus = est.regime == Regime::DivergentPlus;
      est.mean = plus ? kInf : -kInf;
      est.std_error = 0.0;
      const auto& part = plus ? cp.neg : cp.pos;
      const double half = part.size() >= 2 ? part[part.size() / 2] : part.back();
      est.opposite_part = stats::MeanEstimate{part.back(), std::abs(part.back() - half), 0};
      est.method = DriftMethod::Dp;
      return est;
    }
    case Regime::PartsInfinite:
      est.mean = kNaN;
      est.std_error = kNaN;
      est.pos_growth = loglog_slope(ns, cp.pos);
      est.neg_growth = loglog_slope(ns, cp.neg);
      est.method = DriftMethod::Dp;
      return est;
    case Regime::Unknown:
      est.mean = est.dp_value;
      est.std_error = kNaN;
      est.method = DriftMethod::Dp;
      return est;
    case Regime::ConvergentFinite:
      break;
  }

  if (f.is_constant()) {
    est.mean = est.dp_value;
    est.method = DriftMethod::Dp;
    return est;
  }

  // Sqrt tail fit over the last decade of the DP.
  std::vector<double> tn, tv;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i] * 10 >= n_dp) {
      tn.push_back(ns[i]);
      tv.push_back(cp.delta[i]);
    }
  }
  const TailFit fit = fit_tail(tn, tv);
  est.fitted_exponent = fit.exponent;

  double end = static_cast<double>(n_dp);
  est.mean = est.dp_value;
  est.method = DriftMethod::DpTail;
  if (config.n_mc > n_dp && config.replicas > 0) {
    const std::size_t steps = config.n_mc - n_dp;
    const std::span<const double> row = cp.last_row;
    const auto incs = parallel_map<double>(config.replicas, [&](std::size_t r) {
      Stream stream(config.seed, config.stream_base + r, 1);
      const std::size_t k = sample_index(row, stream.uniform());
      UrnState s{init.red + static_cast<double>(k), init.mass + static_cast<double>(n_dp)};
      double fv = f(s.alpha());
      double acc = 0.0;
      for (std::size_t i = 0; i < steps; ++i) {
        s = advance(s, draws_red(fv, stream.uniform()));
        fv = f(s.alpha());
        acc += 2.0 * fv - 1.0;
      }
      return acc;
    });
    const auto m = stats::mean_stderr(incs);
    est.mc_increment = m.mean;
    est.mc_std_error = m.std_error;
    est.replicas = config.replicas;
    est.mean += m.mean;
    end = static_cast<double>(config.n_mc);
    est.truncation = config.n_mc;
    est.method = DriftMethod::DpMcTail;
  }
  est.tail_correction = fit.coefficient / std::sqrt(end);
  est.tail_error = std::abs(est.tail_correction);
  est.mean += est.tail_correction;
  est.std_error = std::sqrt(est.mc_std_error * est.mc_std_error + est.tail_error * est.tail_error);
  return est;
}

PartsProfile drift_parts_profile(const ReinforcementFunction& f, UrnState init,
                                 const ProfileConfig& config) {
  if (config.horizon < 100)
    throw Error(ErrorKind::InvalidParameter, "profile horizon must be >= 100");
  const std::size_t first =
      config.first > 0 ? config.first : std::max<std::size_t>(1, config.horizon / 100);
  const auto at = stats::geometric_checkpoints(first, config.horizon,
                                               std::max<std::size_t>(2, config.checkpoints));
  const std::size_t c = at.size();

  // Per replica: (delta, pos, neg) at each checkpoint.
  const auto per = parallel_map<std::vector<double>>(config.replicas, [&](std::size_t r) {
    std::vector<double> out(3 * c);
    Stream stream(config.seed, r);
    DriftSums sums;
    UrnState s = init;
    double fv = f(s.alpha());
    std::size_t next = 0;
    for (std::size_t m = 0;; ++m) {
      sums.add(fv);
      if (m == at[next]) {
        out[3 * next] = sums.delta;
        out[3 * next + 1] = sums.pos;
        out[3 * next + 2] = sums.neg;
        if (++next == c) break;
      }
      s = advance(s, draws_red(fv, stream.uniform()));
      fv = f(s.alpha());
    }
    return out;
  });

  PartsProfile prof;
  std::vector<double> ns, pos_means, neg_means;
  std::vector<double> col(config.replicas);
  auto column = [&](std::size_t j) -> stats::MeanEstimate {
    for (std::size_t r = 0; r < config.replicas; ++r) col[r] = per[r][j];
    return stats::mean_stderr(col);
  };
  for (std::size_t i = 0; i < c; ++i) {
    ProfileRow row;
    row.n = at[i];
    row.delta = column(3 * i);
    row.pos = column(3 * i + 1);
    row.neg = column(3 * i + 2);
    ns.push_back(static_cast<double>(at[i]));
    pos_means.push_back(row.pos.mean);
    neg_means.push_back(row.neg.mean);
    prof.rows.push_back(row);
  }
  prof.pos_exponent = loglog_slope(ns, pos_means);
  prof.neg_exponent = loglog_slope(ns, neg_means);
  auto last_step = [&](std::size_t offset) {
    for (std::size_t r = 0; r < config.replicas; ++r)
      col[r] = per[r][3 * (c - 1) + offset] - per[r][3 * (c - 2) + offset];
    return stats::mean_stderr(col);
  };
  prof.delta_last_step = last_step(0);
  prof.pos_last_step = last_step(1);
  prof.neg_last_step = last_step(2);
  return prof;
}

CltReport clt_check(const ReinforcementFunction& f, double p, UrnState init,
                    const CltConfig& config) {
  CltReport rep;
  rep.p = p;
  rep.fprime = f.jet(p).d1;
  rep.n = config.n;
  rep.replicas = config.replicas;
  if (!(rep.fprime < 0.5))
    throw Error(ErrorKind::UnsupportedRegime,
                "CLT needs f'(p) < 1/2, got " + std::to_string(rep.fprime));
  if (config.n == 0) throw Error(ErrorKind::InvalidParameter, "CLT needs n >= 1");
  rep.target = p * (1.0 - p) / (1.0 - 2.0 * rep.fprime);

  const auto finals = parallel_map<double>(config.replicas, [&](std::size_t r) {
    Stream stream(config.seed, r);
    return run_urn(f, init, config.n, stream).alpha();
  });
  stats::Accumulator acc;
  double second = 0.0;
  const double scale = std::sqrt(static_cast<double>(config.n));
  for (double a : finals) {
    if (std::abs(a - p) >= config.window) continue;
    const double z = scale * (a - p);
    acc.add(z);
    second += z * z;
  }
  rep.retained = acc.count();
  rep.variance = acc.count() > 1 ? acc.variance() : kNaN;
  rep.second_moment = acc.count() > 0 ? second / static_cast<double>(acc.count()) : kNaN;
  rep.ratio = rep.variance / rep.target;
  return rep;
}

}  // namespace rrw
