#include "rrw/funcs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rrw/error.hpp"

namespace rrw {

ReinforcementFunction ReinforcementFunction::parse(std::string_view text) {
  return from_tree(expr::parse(text), std::string(text));
}

ReinforcementFunction ReinforcementFunction::from_tree(expr::NodePtr tree,
                                                       std::string source) {
  return ReinforcementFunction(
      std::make_shared<const Impl>(std::move(tree), std::move(source)));
}

double ReinforcementFunction::clamp_slow(double v) const {
  impl_->clamps.fetch_add(1, std::memory_order_relaxed);
  if (std::isnan(v)) return kMinReinforcement;
  return std::clamp(v, kMinReinforcement, 1.0);
}

bool FixedPointReport::has_fixed_point_at_half() const {
  return std::any_of(points.begin(), points.end(),
                     [](const FixedPoint& fp) { return std::abs(fp.p - 0.5) <= 1e-9; });
}

std::vector<FixedPoint> FixedPointReport::stable_away_from_half() const {
  std::vector<FixedPoint> out;
  for (const auto& fp : points)
    if (fp.stable && std::abs(fp.p - 0.5) > 1e-9) out.push_back(fp);
  return out;
}

std::size_t FixedPointReport::stable_count() const {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [](const FixedPoint& fp) { return fp.stable; }));
}

namespace {

double grid_x(std::size_t i, std::size_t n) {
  return static_cast<double>(i) / static_cast<double>(n - 1);
}

double bisect_root(const ReinforcementFunction& f, double lo, double hi) {
  double glo = f.raw(lo) - lo;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double gm = f.raw(mid) - mid;
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Minimizes |f(x) - x| on [lo, hi] by golden section.
double golden_min(const ReinforcementFunction& f, double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double x) { return std::abs(f.raw(x) - x); };
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > 1e-13) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

std::string format_param(double u) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", u);
  return buf;
}

}  // namespace

FixedPointReport analyze(const ReinforcementFunction& f,
                         const AnalysisOptions& options) {
  const std::size_t n = std::max<std::size_t>(options.grid_points, 3);
  std::vector<double> xs(n), vs(n), gs(n);
  FixedPointReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  report.max_value = -std::numeric_limits<double>::infinity();
  bool right_ok = true;

  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = grid_x(i, n);
    vs[i] = f.raw(xs[i]);
    gs[i] = vs[i] - xs[i];
  }

  const double tol = options.fixed_point_tol;
  auto is_zero = [&](std::size_t i) { return std::abs(gs[i]) <= tol; };
  const auto zeros = static_cast<std::size_t>(
      std::count_if(gs.begin(), gs.end(), [&](double g) { return std::abs(g) <= tol; }));
  if (static_cast<double>(zeros) > options.plateau_fraction * static_cast<double>(n)) {
    throw Error(ErrorKind::NonIsolatedFixedPoints,
                "f(x) - x vanishes on " + std::to_string(zeros) + " of " +
                    std::to_string(n) + " grid points");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i];
    const double v = vs[i];
    if (!(v > 0.0) || v > 1.0 + 1e-12) {
      throw Error(ErrorKind::RangeViolation,
                  "f(" + format_param(x) + ") = " + format_param(v) +
                      " lies outside (0,1]");
    }
    report.min_value = std::min(report.min_value, v);
    report.max_value = std::max(report.max_value, v);
    if (x >= 0.5 && v < 0.5 - 1e-12) right_ok = false;
  }
  report.ge_half = report.min_value >= 0.5 - 1e-12;
  report.ge_half_right = right_ok;
  if (report.max_value >= 1.0 && !report.ge_half) {
    throw Error(ErrorKind::RangeViolation,
                "f reaches 1 but is not >= 1/2 everywhere");
  }

  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_zero(i)) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 < n && !is_zero(i + 1) && (gs[i] < 0.0) != (gs[i + 1] < 0.0)) {
      roots.push_back(bisect_root(f, xs[i], xs[i + 1]));
    }
    // Tangential roots: |g| has a small local minimum without a sign change.
    if (i > 0 && i + 1 < n && !is_zero(i - 1) && !is_zero(i + 1) &&
        (gs[i - 1] < 0.0) == (gs[i] < 0.0) && (gs[i] < 0.0) == (gs[i + 1] < 0.0) &&
        std::abs(gs[i]) <= std::abs(gs[i - 1]) && std::abs(gs[i]) <= std::abs(gs[i + 1]) &&
        std::abs(gs[i]) < 1e-6) {
      const double x = golden_min(f, xs[i - 1], xs[i + 1]);
      if (std::abs(f.raw(x) - x) <= tol) roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique_roots;
  for (double r : roots)
    if (unique_roots.empty() || r - unique_roots.back() > 1e-9) unique_roots.push_back(r);

  for (double p : unique_roots) {
    const double fprime = f.jet(p).d1;
    report.points.push_back({p, fprime, fprime <= 1.0 + options.derivative_tol});
  }
  report.unique = report.points.size() == 1;
  const auto half = f.jet(0.5);
  report.fprime_half = half.d1;
  report.fsecond_half = half.d2;
  return report;
}

ReinforcementFunction make_family(const ReinforcementFunction& f, double u) {
  if (!(u >= 0.0) || !std::isfinite(u))
    throw Error(ErrorKind::InvalidParameter, "family scale u must be >= 0");
  return ReinforcementFunction::from_tree(
      expr::family(f.tree(), u),
      "family(" + f.source() + ", " + format_param(u) + ")");
}

bool is_symmetric(const ReinforcementFunction& f, double tol,
                  std::size_t grid_points) {
  const std::size_t n = std::max<std::size_t>(grid_points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.5 * grid_x(i, n);
    if (std::abs(f.raw(0.5 - t) - f.raw(0.5 + t)) > tol) return false;
  }
  return true;
}

bool is_identity(const ReinforcementFunction& f, double tol,
                 std::size_t grid_points) {
  const std::size_t n = std::max<std::size_t>(grid_points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_x(i, n);
    if (std::abs(f.raw(x) - x) > tol) return false;
  }
  return true;
}

double first_order_violation(const ReinforcementFunction& f,
                             const ReinforcementFunction& g, double tol,
                             std::size_t grid_points) {
  const std::size_t n = std::max<std::size_t>(grid_points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_x(i, n);
    if (f(x) > g(x) + tol) return x;
  }
  return -1.0;
}

}  // namespace rrw
