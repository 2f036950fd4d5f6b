#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rrw/funcs.hpp"
#include "rrw/rng.hpp"
#include "rrw/urn.hpp"

namespace rrw {

/// Initial urn states: w0 at the origin, w_plus at every x >= 1 and, when
/// given, w_minus at every x <= -1 (otherwise w_plus is used there too).
struct EnvironmentSpec {
  UrnState w0;
  UrnState w_plus;
  std::optional<UrnState> w_minus;

  static EnvironmentSpec homogeneous(UrnState w) { return {w, w, w}; }

  bool hypothesis1() const { return true; }
  bool hypothesis2() const { return w_minus.has_value(); }
  UrnState at(std::int64_t x) const {
    if (x == 0) return w0;
    if (x > 0) return w_plus;
    return w_minus.value_or(w_plus);
  }
};

/// Per-site state along a walk. Sites visited by a nearest-neighbour walk
/// form an interval, so storage is two dense vectors grown on demand.
class SiteTable {
 public:
  explicit SiteTable(const EnvironmentSpec& env) : env_(env) {}

  struct Site {
    UrnState urn;
    std::uint64_t visits = 0;  // departures so far, i.e. L^x
  };

  Site& operator[](std::int64_t x) {
    auto& side = x >= 0 ? right_ : left_;
    const auto i = static_cast<std::size_t>(x >= 0 ? x : -x - 1);
    while (side.size() <= i) {
      const auto y = static_cast<std::int64_t>(side.size());
      side.push_back({env_.at(x >= 0 ? y : -y - 1), 0});
    }
    return side[i];
  }

  std::int64_t min_site() const { return -static_cast<std::int64_t>(left_.size()); }
  std::int64_t max_site() const { return static_cast<std::int64_t>(right_.size()) - 1; }

 private:
  EnvironmentSpec env_;
  std::vector<Site> right_;  // x = 0, 1, 2, ...
  std::vector<Site> left_;   // x = -1, -2, ...
};

/// Running functionals: U (0 -> -1 steps), X^+, the compensator D^+ over
/// nonnegative sites and M^+ = X^+ - D^+.
struct WalkTotals {
  std::uint64_t n = 0;
  std::int64_t x = 0;
  std::uint64_t u = 0;
  std::int64_t xplus = 0;
  double dplus = 0.0;
  double m() const { return static_cast<double>(xplus) - dplus; }
};

/// Stepper for one walk; consumes one uniform per step at the current site.
class Walker {
 public:
  Walker(ReinforcementFunction f, const EnvironmentSpec& env)
      : f_(std::move(f)), sites_(env) {}

  /// Advances one step with the given uniform; returns the step (+1 / -1).
  int step(double uniform);

  const WalkTotals& totals() const { return t_; }
  SiteTable& sites() { return sites_; }
  /// f at the current site's urn, i.e. the probability of the next right step.
  double right_probability() { return f_(sites_[t_.x].urn.alpha()); }

 private:
  ReinforcementFunction f_;
  SiteTable sites_;
  WalkTotals t_;
};

enum class StopKind { Horizon, HitLevel, HitEither };

struct StopRule {
  StopKind kind = StopKind::Horizon;
  std::uint64_t horizon = 0;    // used by Horizon
  std::int64_t level = 1;       // a for HitLevel (X = a) and HitEither (|X| = a)
  std::uint64_t cap = 100000000;
};

enum class WalkStatus { Completed, CapReached };

struct WalkRecord {
  EnvironmentSpec env;
  std::vector<std::int64_t> path;  // X_0..X_n
  /// State of the urn at X_k just before step k (rows k = 0..n).
  std::vector<UrnState> site_state;
  std::vector<double> uniforms;  // filled only when requested
  std::map<std::int64_t, std::uint64_t> visits;  // L^x_n
  std::map<std::int64_t, UrnState> final_urns;
  WalkStatus status = WalkStatus::Completed;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::uint64_t steps() const { return path.empty() ? 0 : path.size() - 1; }
};

WalkRecord simulate_walk(const ReinforcementFunction& f, const EnvironmentSpec& env,
                         const StopRule& stop, Stream stream, bool keep_uniforms = false);

struct WalkFunctionals {
  std::vector<std::uint64_t> u;
  std::vector<std::int64_t> xplus;
  std::vector<double> dplus;
  std::vector<double> m;
  std::optional<std::uint64_t> t_a;  // first hitting time of the level
  std::uint64_t u_ta = 0;
  double dplus_ta = 0.0;
};

/// Replays the site urns along the recorded path and returns the per-step
/// series; T_a and the values at T_a when `level` is given and reached.
WalkFunctionals walk_functionals(const ReinforcementFunction& f, const WalkRecord& record,
                                 std::optional<std::int64_t> level = std::nullopt);

struct HitSample {
  bool hit = false;  // false when the cap fired first; values are then at the cap
  std::uint64_t t = 0;
  std::uint64_t u = 0;
  double dplus = 0.0;
  std::int64_t x = 0;
};

/// One walk run until it reaches max(levels) or the cap; records (T, U, D^+)
/// at the first hit of each level (levels must be positive, increasing).
std::vector<HitSample> hitting_functionals(const ReinforcementFunction& f,
                                           const EnvironmentSpec& env,
                                           const std::vector<std::int64_t>& levels,
                                           std::uint64_t cap, Stream stream);

/// Exhaustive expectation over all 2^h paths.
struct WalkOracle {
  std::size_t horizon = 0;
  /// dist[m][j + m] = P(X_m = j), j = -m..m.
  std::vector<std::vector<double>> dist;
  std::vector<double> total;  // sum of dist[m]
  std::vector<double> m_plus, x_plus, d_plus, u;
  /// hit[a - 1] = P(T_a <= h) for a = 1..h.
  std::vector<double> hit;

  double prob(std::size_t m, std::int64_t j) const;
};

inline constexpr std::size_t kMaxOracleHorizon = 16;

/// Throws HorizonTooLarge for h > 16.
WalkOracle exact_walk_oracle(const ReinforcementFunction& f, const EnvironmentSpec& env,
                             std::size_t horizon);

struct RegimeConfig {
  std::uint64_t horizon = 100000;
  std::uint64_t burn_in = 1000;
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
};

/// Heuristic recurrence evidence; not a proof of anything.
struct RegimeEvidence {
  double return_fraction = 0.0;  // replicas visiting 0 after burn-in
  double escape_fraction = 0.0;  // 1 - return_fraction
  double mean_returns = 0.0;     // visits to 0 after burn-in
  double mean_max_level = 0.0;   // max |X_k|
  double right_fraction = 0.0;   // replicas ending at X_n > 0
  std::size_t replicas = 0;
  std::uint64_t horizon = 0;
  std::uint64_t burn_in = 0;
};

RegimeEvidence empirical_regime(const ReinforcementFunction& f, const EnvironmentSpec& env,
                                const RegimeConfig& config);

}  // namespace rrw
