#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rrw/expression.hpp"

namespace rrw {

/// Lower clamp applied to f at evaluation time.
inline constexpr double kMinReinforcement = 1e-12;

/// A reinforcement function f : [0,1] -> (0,1].
///
/// Values are immutable and cheap to copy (the compiled program is shared);
/// evaluation is pure and thread-safe. The only shared mutable state is the
/// clamp counter, which records how often an evaluation fell outside
/// [1e-12, 1] and had to be clamped.
class ReinforcementFunction {
 public:
  /// Parses an expression or builtin name; throws SyntaxError /
  /// InvalidParameter.
  static ReinforcementFunction parse(std::string_view text);
  static ReinforcementFunction from_tree(expr::NodePtr tree, std::string source);

  /// f(x) clamped to [1e-12, 1].
  double operator()(double x) const {
    const double v = impl_->program.eval(x);
    if (v < kMinReinforcement || v > 1.0) [[unlikely]]
      return clamp_slow(v);
    return v;
  }

  /// Unclamped value.
  double raw(double x) const { return impl_->program.eval(x); }

  /// Exact first and second derivatives of the expression tree at x.
  expr::Jet jet(double x) const { return impl_->program.eval_jet(x); }

  bool is_constant() const noexcept { return impl_->program.is_constant(); }

  const std::string& source() const noexcept { return impl_->source; }
  const expr::NodePtr& tree() const noexcept { return impl_->tree; }

  /// Canonical text that parses back to an equivalent evaluator.
  std::string print() const { return expr::print(impl_->tree); }

  std::uint64_t clamp_count() const noexcept { return impl_->clamps.load(); }

 private:
  struct Impl {
    Impl(expr::NodePtr t, std::string s)
        : tree(std::move(t)), program(tree), source(std::move(s)) {}
    expr::NodePtr tree;
    expr::Program program;
    std::string source;
    mutable std::atomic<std::uint64_t> clamps{0};
  };

  explicit ReinforcementFunction(std::shared_ptr<const Impl> impl)
      : impl_(std::move(impl)) {}

  double clamp_slow(double v) const;

  std::shared_ptr<const Impl> impl_;
};

struct FixedPoint {
  double p = 0.0;
  double fprime = 0.0;
  bool stable = false;
};

struct FixedPointReport {
  std::vector<FixedPoint> points;
  bool ge_half = false;        // f >= 1/2 on [0,1]
  bool ge_half_right = false;  // f >= 1/2 on [1/2,1]
  bool unique = false;
  double fprime_half = 0.0;
  double fsecond_half = 0.0;
  double min_value = 0.0;  // grid minimum of f
  double max_value = 0.0;  // grid maximum of f

  bool has_fixed_point_at_half() const;
  /// Stable fixed points other than 1/2.
  std::vector<FixedPoint> stable_away_from_half() const;
  std::size_t stable_count() const;
};

struct AnalysisOptions {
  std::size_t grid_points = 10001;  // >= 1e4 intervals' worth of points
  double fixed_point_tol = 1e-12;
  double derivative_tol = 1e-9;
  double plateau_fraction = 0.01;
};

/// Locates fixed points by sign-change scan of f(x) - x plus bisection, with
/// a golden-section pass for tangential roots; reports f', f'' from the
/// expression tree. Throws NonIsolatedFixedPoints or RangeViolation.
FixedPointReport analyze(const ReinforcementFunction& f,
                         const AnalysisOptions& options = {});

/// g with 2g - 1 = min(u (2f - 1), 1). Throws InvalidParameter for u < 0.
ReinforcementFunction make_family(const ReinforcementFunction& f, double u);

/// Grid check of f(1/2 - t) = f(1/2 + t) within tol.
bool is_symmetric(const ReinforcementFunction& f, double tol = 1e-10,
                  std::size_t grid_points = 10001);

/// Grid check of f(x) = x within tol.
bool is_identity(const ReinforcementFunction& f, double tol = 1e-12,
                 std::size_t grid_points = 10001);

/// Grid check of f(x) <= g(x) (within tol). Returns the first violating x or
/// a negative value when the order holds.
double first_order_violation(const ReinforcementFunction& f,
                             const ReinforcementFunction& g, double tol = 0.0,
                             std::size_t grid_points = 10001);

}  // namespace rrw
