#include "rrw/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rrw/error.hpp"

namespace rrw::stats {

MeanEstimate mean_stderr(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

void Accumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double Accumulator::variance() const noexcept {
  return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double Accumulator::std_error() const noexcept {
  return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::InvalidParameter, "fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2 && sxx > 0.0) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - c,
                             c - static_cast<double>(i) / n));
  }
  return d;
}

std::vector<std::size_t> geometric_checkpoints(std::size_t first,
                                               std::size_t last,
                                               std::size_t count) {
  if (first == 0 || first > last || count == 0)
    throw Error(ErrorKind::InvalidParameter, "bad checkpoint range");
  std::vector<std::size_t> out;
  if (count == 1 || first == last) {
    out.push_back(last);
    return out;
  }
  const double ratio = std::log(static_cast<double>(last) / first) /
                       static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    auto v = static_cast<std::size_t>(
        std::llround(static_cast<double>(first) * std::exp(ratio * i)));
    v = std::clamp(v, first, last);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  if (out.back() != last) out.push_back(last);
  return out;
}

}  // namespace rrw::stats
