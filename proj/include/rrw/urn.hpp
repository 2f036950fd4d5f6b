#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rrw/funcs.hpp"
#include "rrw/rng.hpp"

namespace rrw {

/// Two-color urn state. Stored as (red mass, total mass) so that after n
/// steps the red mass differs from the initial one by the exact integer
/// number of Red draws; alpha() is derived.
struct UrnState {
  double red = 0.5;
  double mass = 1.0;

  /// Validates 0 <= alpha <= 1 and l > 0; throws InvalidParameter.
  static UrnState make(double alpha, double l);

  double alpha() const noexcept { return red / mass; }
  double l() const noexcept { return mass; }

  friend bool operator==(const UrnState&, const UrnState&) = default;
};

enum class Draw : std::uint8_t { Red, Blue };

/// The shared draw convention: Red iff uniform < f(alpha).
inline bool draws_red(double probability, double uniform) {
  return uniform < probability;
}

/// Applies one draw outcome: red mass grows by 1 on Red, mass grows by 1.
inline UrnState advance(UrnState s, bool red) {
  return {red ? s.red + 1.0 : s.red, s.mass + 1.0};
}

/// One urn transition driven by a caller-supplied uniform in [0,1).
inline UrnState urn_step(UrnState s, const ReinforcementFunction& f,
                         double uniform) {
  return advance(s, draws_red(f(s.alpha()), uniform));
}

struct UrnTrajectory {
  UrnState initial;
  std::vector<Draw> draws;       // length n
  std::vector<UrnState> states;  // length n + 1
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

UrnTrajectory simulate_urn(const ReinforcementFunction& f, UrnState init,
                           std::size_t n, Stream stream);

/// Runs n steps and returns only the final state (no trajectory storage).
UrnState run_urn(const ReinforcementFunction& f, UrnState init, std::size_t n,
                 Stream& stream);

inline constexpr std::size_t kDefaultMaxHorizon = 20000;

/// Exact law of the number of Red draws: row n holds P(k Red draws in the
/// first n steps) for k = 0..n. The state after n steps with k Red draws is
/// ((l0 a0 + k)/(l0 + n), l0 + n).
class ExactUrnLaw {
 public:
  ExactUrnLaw(const ReinforcementFunction& f, UrnState init, std::size_t horizon,
              std::size_t max_horizon = kDefaultMaxHorizon);

  std::size_t horizon() const noexcept { return rows_.size() - 1; }
  UrnState initial() const noexcept { return init_; }
  std::span<const double> row(std::size_t n) const { return rows_.at(n); }
  double prob(std::size_t n, std::size_t k) const { return rows_.at(n).at(k); }
  double alpha_at(std::size_t n, std::size_t k) const;

  /// E[g(alpha_n)].
  double expect(std::size_t n, const std::function<double(double)>& g) const;

 private:
  UrnState init_;
  std::vector<std::vector<double>> rows_;
};

/// Receives (n, P(n, .), f(alpha_{n,.})) for each row. f values are only
/// computed where the row is nonzero (1/2 elsewhere).
using ExactRowVisitor = std::function<void(std::size_t, std::span<const double>,
                                           std::span<const double>)>;

/// Streams the exact rows 0..horizon through `visit` in O(horizon) memory.
/// Rows are renormalized whenever their sum drifts from 1 by more than 1e-12;
/// probabilities below 1e-300 are set to zero.
void for_each_exact_row(const ReinforcementFunction& f, UrnState init,
                        std::size_t horizon, const ExactRowVisitor& visit);

}  // namespace rrw
