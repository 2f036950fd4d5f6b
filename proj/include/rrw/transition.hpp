#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rrw/drift.hpp"
#include "rrw/funcs.hpp"

namespace rrw {

/// u: scale of the family f_u with urns at (1/2, 2l). l: initial mass with
/// urns at (1/2, 2l) and f fixed (the family member at the other parameter).
enum class Axis { U, L };

std::string_view axis_name(Axis a);

struct ThresholdConfig {
  Axis axis = Axis::U;
  double other = 1.0;  // l when scanning u, u when scanning l
  double lo = 0.1;
  double hi = 64.0;
  double target = 1.0;
  double rel_width = 0.1;  // stop once hi - lo <= rel_width * midpoint
  double z = stats::kZ99;
  std::size_t n_dp = 10000;
  std::size_t n_mc = 100000;
  std::size_t replicas = 256;
  std::size_t max_replicas = 4096;
  std::size_t max_evaluations = 60;
  std::uint64_t seed = 1;
};

struct Evaluation {
  double param = 0.0;
  DriftEstimate estimate;
  int side = 0;  // +1 above target, -1 below, 0 undecided
};

enum class ThresholdStatus { Bracketed, NoCrossing, BudgetExhausted, MonotonicityViolation };

std::string_view threshold_status_name(ThresholdStatus s);

struct ThresholdResult {
  Axis axis = Axis::U;
  double lo = 0.0;
  double hi = 0.0;
  Evaluation est_lo;
  Evaluation est_hi;
  ThresholdStatus status = ThresholdStatus::BudgetExhausted;
  std::string detail;
  std::vector<Evaluation> log;  // every evaluation in order, escalations included
};

/// The drift estimate at one parameter value.
DriftEstimate evaluate_axis(const ReinforcementFunction& base, Axis axis, double param,
                            double other, const DriftConfig& config);

/// CI-aware bisection on geometric midpoints; every endpoint kept as a
/// bracket side has a 99% interval strictly on its side of the target.
ThresholdResult find_threshold(const ReinforcementFunction& base, const ThresholdConfig& config);

struct SweepRow {
  double param = 0.0;
  DriftEstimate estimate;
};

struct SweepResult {
  Axis axis = Axis::U;
  std::vector<SweepRow> rows;
  /// Indices i where rows i, i+1 break the expected monotonicity by more
  /// than 3 combined standard errors.
  std::vector<std::size_t> flags;
};

/// Throws InvalidParameter when the grid is not sorted.
SweepResult sweep(const ReinforcementFunction& base, Axis axis, const std::vector<double>& grid,
                  double other, const DriftConfig& config);

}  // namespace rrw
