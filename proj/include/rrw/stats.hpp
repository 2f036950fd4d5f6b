#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rrw::stats {

/// Two-sided normal quantiles used for confidence intervals.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error (n-1 denominator). Summation runs in index
/// order, so the result is bit-stable for a given input vector.
MeanEstimate mean_stderr(std::span<const double> values);

/// Welford accumulator; used where samples are produced sequentially.
class Accumulator {
 public:
  void add(double x);
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // sample variance, n-1 denominator
  double std_error() const noexcept;
  MeanEstimate estimate() const { return {mean(), std_error(), count()}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least 2 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/// Geometrically spaced integer checkpoints in [first, last], strictly
/// increasing, always containing both ends.
std::vector<std::size_t> geometric_checkpoints(std::size_t first,
                                               std::size_t last,
                                               std::size_t count);

}  // namespace rrw::stats
