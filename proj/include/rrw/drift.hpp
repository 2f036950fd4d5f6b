#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrw/funcs.hpp"
#include "rrw/rng.hpp"
#include "rrw/stats.hpp"
#include "rrw/urn.hpp"

namespace rrw {

/// delta_m = sum_{k=0}^{m} (2 f(alpha_k) - 1) and its positive/negative parts,
/// for m = 0..n. Pathwise for simulated series, expectations for exact ones.
struct DriftSeries {
  std::vector<double> values;
  std::vector<double> pos;
  std::vector<double> neg;
};

DriftSeries drift_series(const ReinforcementFunction& f, UrnState init,
                         std::size_t n, Stream stream);

/// E[delta_m], E[delta_m^+], E[delta_m^-] from the exact urn law.
DriftSeries exact_drift_series(const ReinforcementFunction& f, UrnState init,
                               std::size_t n);

enum class Regime { ConvergentFinite, DivergentPlus, DivergentMinus, PartsInfinite, Unknown };

std::string_view regime_name(Regime r);

struct RegimeDecision {
  Regime regime = Regime::Unknown;
  std::string reason;
};

/// Maps the fixed-point structure onto the drift regimes:
///  - f >= 1/2 and a stable fixed point other than 1/2 -> DivergentPlus;
///  - unique fixed point p > 1/2 (< 1/2) -> DivergentPlus (DivergentMinus);
///  - 1/2 the only stable point with f'(1/2) != 0 -> PartsInfinite;
///  - f'(1/2) = 0, f''(1/2) > 0 (< 0) -> DivergentPlus (DivergentMinus);
///  - f'(1/2) = f''(1/2) = 0 -> ConvergentFinite;
///  - anything else -> Unknown.
RegimeDecision decide_regime(const FixedPointReport& report,
                             double derivative_tol = 1e-9);

struct DriftConfig {
  std::size_t n_dp = 10000;
  std::size_t n_mc = 1000000;
  std::size_t replicas = 10000;
  std::uint64_t seed = 1;
  std::uint64_t stream_base = 0;
};

enum class DriftMethod { Dp, Mc, DpTail, DpMcTail };

std::string_view method_name(DriftMethod m);

struct DriftEstimate {
  Regime regime = Regime::Unknown;
  DriftMethod method = DriftMethod::Dp;
  /// +/-infinity for the divergent regimes, NaN for PartsInfinite.
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t truncation = 0;
  double dp_value = 0.0;        // exact E[delta_{n_dp}]
  double mc_increment = 0.0;    // MC estimate of E[delta_{n_mc}] - E[delta_{n_dp}]
  double mc_std_error = 0.0;
  std::size_t replicas = 0;
  double tail_correction = 0.0;
  double tail_error = 0.0;
  std::string tail_model = "sqrt";
  /// Free-exponent fit beta of E[delta_inf] - E[delta_N] ~ N^-beta over the
  /// last decade of the DP; NaN when the increments vanish or change sign.
  double fitted_exponent = 0.0;
  /// Finite part opposite to a divergence (E[delta^-] for DivergentPlus).
  std::optional<stats::MeanEstimate> opposite_part;
  /// Log-log growth exponents of E[delta_N^+], E[delta_N^-] (PartsInfinite).
  std::optional<double> pos_growth;
  std::optional<double> neg_growth;
  std::string reason;

  bool is_divergent() const {
    return regime == Regime::DivergentPlus || regime == Regime::DivergentMinus;
  }
  double ci_low(double z) const { return mean - z * std_error; }
  double ci_high(double z) const { return mean + z * std_error; }
};

DriftEstimate estimate_delta_inf(const ReinforcementFunction& f, UrnState init,
                                 const DriftConfig& config);

/// Variant reusing an existing analysis (nullopt when analysis failed).
DriftEstimate estimate_delta_inf(const ReinforcementFunction& f, UrnState init,
                                 const DriftConfig& config,
                                 const std::optional<FixedPointReport>& report);

struct TailFit {
  double limit = 0.0;
  double coefficient = 0.0;  // c in E_N = limit - c N^-1/2
  double exponent = 0.0;     // free fit, NaN if unavailable
};

/// Fits the sqrt tail model and the free exponent on (N_i, E_i) samples taken
/// at geometric checkpoints.
TailFit fit_tail(std::span<const double> ns, std::span<const double> values);

struct ProfileRow {
  std::size_t n = 0;
  stats::MeanEstimate delta;
  stats::MeanEstimate pos;
  stats::MeanEstimate neg;
};

struct PartsProfile {
  std::vector<ProfileRow> rows;
  double pos_exponent = 0.0;  // least squares slope of log E[delta^+] vs log N
  double neg_exponent = 0.0;
  /// Paired differences between the last two checkpoints.
  stats::MeanEstimate pos_last_step;
  stats::MeanEstimate neg_last_step;
  stats::MeanEstimate delta_last_step;
};

struct ProfileConfig {
  std::size_t horizon = 100000;
  std::size_t replicas = 1000;
  std::size_t checkpoints = 15;
  std::size_t first = 0;  // 0 -> horizon / 100
  std::uint64_t seed = 1;
};

PartsProfile drift_parts_profile(const ReinforcementFunction& f, UrnState init,
                                 const ProfileConfig& config);

struct CltReport {
  double p = 0.0;
  double fprime = 0.0;
  double target = 0.0;    // p(1-p) / (1 - 2 f'(p))
  double variance = 0.0;  // sample variance of sqrt(n)(alpha_n - p)
  double second_moment = 0.0;
  double ratio = 0.0;     // variance / target
  std::size_t retained = 0;
  std::size_t replicas = 0;
  std::size_t n = 0;
};

struct CltConfig {
  std::size_t n = 10000;
  std::size_t replicas = 10000;
  double window = 0.1;
  std::uint64_t seed = 1;
};

/// Throws UnsupportedRegime when f'(p) >= 1/2.
CltReport clt_check(const ReinforcementFunction& f, double p, UrnState init,
                    const CltConfig& config);

}  // namespace rrw
