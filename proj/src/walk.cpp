#include "rrw/walk.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "rrw/error.hpp"
#include "rrw/parallel.hpp"

namespace rrw {

int Walker::step(double uniform) {
  auto& site = sites_[t_.x];
  const double fv = f_(site.urn.alpha());
  const bool right = draws_red(fv, uniform);
  site.urn = advance(site.urn, right);
  ++site.visits;
  const int d = right ? 1 : -1;
  if (t_.x >= 0) {
    t_.xplus += d;
    t_.dplus += 2.0 * fv - 1.0;
    if (t_.x == 0 && d < 0) ++t_.u;
  }
  t_.x += d;
  ++t_.n;
  return d;
}

namespace {

bool stop_now(const StopRule& stop, const WalkTotals& t) {
  switch (stop.kind) {
    case StopKind::Horizon: return t.n >= stop.horizon;
    case StopKind::HitLevel: return t.x == stop.level;
    case StopKind::HitEither: return std::llabs(t.x) == stop.level;
  }
  return true;
}

}  // namespace

WalkRecord simulate_walk(const ReinforcementFunction& f, const EnvironmentSpec& env,
                         const StopRule& stop, Stream stream, bool keep_uniforms) {
  if (stop.kind != StopKind::Horizon && stop.level == 0)
    throw Error(ErrorKind::InvalidParameter, "hitting level must be nonzero");
  if (stop.kind == StopKind::HitEither && stop.level < 0)
    throw Error(ErrorKind::InvalidParameter, "two-sided level must be positive");
  WalkRecord rec;
  rec.env = env;
  rec.seed = stream.seed();
  rec.stream_id = stream.stream_id();
  Walker w(f, env);
  rec.path.push_back(0);
  rec.site_state.push_back(w.sites()[0].urn);
  while (!stop_now(stop, w.totals())) {
    if (w.totals().n >= stop.cap) {
      rec.status = WalkStatus::CapReached;
      break;
    }
    const double u = stream.uniform();
    if (keep_uniforms) rec.uniforms.push_back(u);
    w.step(u);
    rec.path.push_back(w.totals().x);
    rec.site_state.push_back(w.sites()[w.totals().x].urn);
  }
  auto& sites = w.sites();
  for (std::int64_t x = sites.min_site(); x <= sites.max_site(); ++x) {
    const auto& s = sites[x];
    if (s.visits > 0) rec.visits[x] = s.visits;
    rec.final_urns[x] = s.urn;
  }
  return rec;
}

WalkFunctionals walk_functionals(const ReinforcementFunction& f, const WalkRecord& record,
                                 std::optional<std::int64_t> level) {
  WalkFunctionals out;
  const std::size_t n = record.steps();
  out.u.reserve(n + 1);
  out.xplus.reserve(n + 1);
  out.dplus.reserve(n + 1);
  out.m.reserve(n + 1);
  SiteTable sites(record.env);
  WalkTotals t;
  auto push = [&](std::size_t k) {
    out.u.push_back(t.u);
    out.xplus.push_back(t.xplus);
    out.dplus.push_back(t.dplus);
    out.m.push_back(t.m());
    if (level && !out.t_a && record.path[k] == *level) {
      out.t_a = k;
      out.u_ta = t.u;
      out.dplus_ta = t.dplus;
    }
  };
  push(0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t x = record.path[k];
    const int d = static_cast<int>(record.path[k + 1] - x);
    auto& site = sites[x];
    const double fv = f(site.urn.alpha());
    site.urn = advance(site.urn, d > 0);
    if (x >= 0) {
      t.xplus += d;
      t.dplus += 2.0 * fv - 1.0;
      if (x == 0 && d < 0) ++t.u;
    }
    t.x = record.path[k + 1];
    ++t.n;
    push(k + 1);
  }
  return out;
}

std::vector<HitSample> hitting_functionals(const ReinforcementFunction& f,
                                           const EnvironmentSpec& env,
                                           const std::vector<std::int64_t>& levels,
                                           std::uint64_t cap, Stream stream) {
  if (levels.empty()) return {};
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] <= 0 || (i > 0 && levels[i] <= levels[i - 1]))
      throw Error(ErrorKind::InvalidParameter, "levels must be positive and increasing");
  std::vector<HitSample> out(levels.size());
  Walker w(f, env);
  std::size_t next = 0;
  while (next < levels.size() && w.totals().n < cap) {
    w.step(stream.uniform());
    const auto& t = w.totals();
    if (t.x == levels[next]) {
      out[next] = {true, t.n, t.u, t.dplus, t.x};
      ++next;
    }
  }
  const auto& t = w.totals();
  for (; next < levels.size(); ++next) out[next] = {false, t.n, t.u, t.dplus, t.x};
  return out;
}

double WalkOracle::prob(std::size_t m, std::int64_t j) const {
  const auto& row = dist.at(m);
  const std::int64_t i = j + static_cast<std::int64_t>(m);
  if (i < 0 || i >= static_cast<std::int64_t>(row.size())) return 0.0;
  return row[static_cast<std::size_t>(i)];
}

WalkOracle exact_walk_oracle(const ReinforcementFunction& f, const EnvironmentSpec& env,
                             std::size_t horizon) {
  if (horizon > kMaxOracleHorizon)
    throw Error(ErrorKind::HorizonTooLarge,
                "walk oracle horizon " + std::to_string(horizon) + " exceeds 16");
  WalkOracle o;
  o.horizon = horizon;
  o.dist.resize(horizon + 1);
  for (std::size_t m = 0; m <= horizon; ++m) o.dist[m].assign(2 * m + 1, 0.0);
  o.total.assign(horizon + 1, 0.0);
  o.m_plus.assign(horizon + 1, 0.0);
  o.x_plus.assign(horizon + 1, 0.0);
  o.d_plus.assign(horizon + 1, 0.0);
  o.u.assign(horizon + 1, 0.0);
  o.hit.assign(horizon, 0.0);

  const auto h = static_cast<std::int64_t>(horizon);
  std::vector<UrnState> urns(2 * horizon + 1);
  for (std::int64_t x = -h; x <= h; ++x) urns[static_cast<std::size_t>(x + h)] = env.at(x);

  // Depth-first over all paths; urn updates are undone on the way back.
  std::function<void(std::size_t, std::int64_t, double, WalkTotals, std::int64_t)> visit =
      [&](std::size_t m, std::int64_t x, double p, WalkTotals t, std::int64_t max_x) {
        o.dist[m][static_cast<std::size_t>(x + static_cast<std::int64_t>(m))] += p;
        o.total[m] += p;
        o.m_plus[m] += p * t.m();
        o.x_plus[m] += p * static_cast<double>(t.xplus);
        o.d_plus[m] += p * t.dplus;
        o.u[m] += p * static_cast<double>(t.u);
        if (m == horizon) {
          for (std::int64_t a = 1; a <= max_x; ++a) o.hit[static_cast<std::size_t>(a - 1)] += p;
          return;
        }
        UrnState& urn = urns[static_cast<std::size_t>(x + h)];
        const UrnState saved = urn;
        const double fv = f(saved.alpha());
        for (int d : {1, -1}) {
          const double q = d > 0 ? fv : 1.0 - fv;
          if (q <= 0.0) continue;
          WalkTotals nt = t;
          if (x >= 0) {
            nt.xplus += d;
            nt.dplus += 2.0 * fv - 1.0;
            if (x == 0 && d < 0) ++nt.u;
          }
          nt.x = x + d;
          ++nt.n;
          urn = advance(saved, d > 0);
          visit(m + 1, x + d, p * q, nt, std::max(max_x, x + d));
        }
        urn = saved;
      };
  visit(0, 0, 1.0, WalkTotals{}, 0);
  return o;
}

RegimeEvidence empirical_regime(const ReinforcementFunction& f, const EnvironmentSpec& env,
                                const RegimeConfig& config) {
  struct One {
    bool returned = false;
    double returns = 0.0;
    double max_level = 0.0;
    bool right = false;
  };
  const auto runs = parallel_map<One>(config.replicas, [&](std::size_t r) {
    Stream stream(config.seed, r);
    Walker w(f, env);
    One one;
    std::int64_t max_level = 0;
    for (std::uint64_t k = 0; k < config.horizon; ++k) {
      w.step(stream.uniform());
      const auto x = w.totals().x;
      max_level = std::max<std::int64_t>(max_level, std::llabs(x));
      if (x == 0 && w.totals().n > config.burn_in) one.returns += 1.0;
    }
    one.returned = one.returns > 0.0;
    one.max_level = static_cast<double>(max_level);
    one.right = w.totals().x > 0;
    return one;
  });
  RegimeEvidence ev;
  ev.replicas = config.replicas;
  ev.horizon = config.horizon;
  ev.burn_in = config.burn_in;
  if (runs.empty()) return ev;
  for (const auto& one : runs) {
    ev.return_fraction += one.returned;
    ev.mean_returns += one.returns;
    ev.mean_max_level += one.max_level;
    ev.right_fraction += one.right;
  }
  const double n = static_cast<double>(runs.size());
  ev.return_fraction /= n;
  ev.mean_returns /= n;
  ev.mean_max_level /= n;
  ev.right_fraction /= n;
  ev.escape_fraction = 1.0 - ev.return_fraction;
  return ev;
}

}  // namespace rrw
