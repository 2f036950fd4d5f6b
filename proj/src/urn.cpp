#include "rrw/urn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrw/error.hpp"

namespace rrw {

UrnState UrnState::make(double alpha, double l) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::InvalidParameter, "urn proportion must lie in [0,1]");
  if (!(l > 0.0) || !std::isfinite(l))
    throw Error(ErrorKind::InvalidParameter, "urn mass must be > 0");
  return {alpha * l, l};
}

UrnTrajectory simulate_urn(const ReinforcementFunction& f, UrnState init,
                           std::size_t n, Stream stream) {
  UrnTrajectory traj;
  traj.initial = init;
  traj.seed = stream.seed();
  traj.stream_id = stream.stream_id();
  traj.draws.reserve(n);
  traj.states.reserve(n + 1);
  traj.states.push_back(init);
  UrnState s = init;
  for (std::size_t i = 0; i < n; ++i) {
    const bool red = draws_red(f(s.alpha()), stream.uniform());
    s = advance(s, red);
    traj.draws.push_back(red ? Draw::Red : Draw::Blue);
    traj.states.push_back(s);
  }
  return traj;
}

UrnState run_urn(const ReinforcementFunction& f, UrnState init, std::size_t n,
                 Stream& stream) {
  UrnState s = init;
  for (std::size_t i = 0; i < n; ++i) s = advance(s, draws_red(f(s.alpha()), stream.uniform()));
  return s;
}

void for_each_exact_row(const ReinforcementFunction& f, UrnState init,
                        std::size_t horizon, const ExactRowVisitor& visit) {
  // Probabilities below this are dropped; subnormals would slow every row.
  constexpr double kFloor = 1e-300;
  std::vector<double> cur{1.0};
  std::vector<double> next;
  std::vector<double> fv;
  cur.reserve(horizon + 1);
  next.reserve(horizon + 1);
  fv.reserve(horizon + 1);
  std::size_t lo = 0, hi = 0;  // nonzero window of the current row
  for (std::size_t n = 0;; ++n) {
    const double mass = init.mass + static_cast<double>(n);
    fv.assign(n + 1, 0.5);
    for (std::size_t k = lo; k <= hi; ++k) fv[k] = f((init.red + static_cast<double>(k)) / mass);
    visit(n, cur, fv);
    if (n == horizon) break;
    next.assign(n + 2, 0.0);
    for (std::size_t k = lo; k <= hi; ++k) {
      next[k] += cur[k] * (1.0 - fv[k]);
      next[k + 1] += cur[k] * fv[k];
    }
    std::size_t new_lo = n + 1, new_hi = 0;
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi + 1; ++k) {
      if (next[k] < kFloor) {
        next[k] = 0.0;
        continue;
      }
      sum += next[k];
      new_lo = std::min(new_lo, k);
      new_hi = k;
    }
    lo = new_lo;
    hi = new_hi;
    if (std::abs(sum - 1.0) > 1e-12)
      for (std::size_t k = lo; k <= hi; ++k) next[k] /= sum;
    cur.swap(next);
  }
}

ExactUrnLaw::ExactUrnLaw(const ReinforcementFunction& f, UrnState init,
                         std::size_t horizon, std::size_t max_horizon)
    : init_(init) {
  if (horizon > max_horizon)
    throw Error(ErrorKind::HorizonTooLarge,
                "exact urn horizon " + std::to_string(horizon) + " exceeds " +
                    std::to_string(max_horizon));
  rows_.reserve(horizon + 1);
  for_each_exact_row(f, init, horizon, [&](std::size_t, std::span<const double> row,
                                           std::span<const double>) {
    rows_.emplace_back(row.begin(), row.end());
  });
}

double ExactUrnLaw::alpha_at(std::size_t n, std::size_t k) const {
  return (init_.red + static_cast<double>(k)) / (init_.mass + static_cast<double>(n));
}

double ExactUrnLaw::expect(std::size_t n, const std::function<double(double)>& g) const {
  const auto& r = rows_.at(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) acc += r[k] * g(alpha_at(n, k));
  return acc;
}

}  // namespace rrw
