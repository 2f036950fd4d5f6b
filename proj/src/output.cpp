#include "rrw/output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rrw::out {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

json to_json(const FixedPointReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"p", num(p.p)}, {"fprime", num(p.fprime)}, {"stable", p.stable}});
  return {{"fixed_points", pts},
          {"fprime_half", num(r.fprime_half)},
          {"fsecond_half", num(r.fsecond_half)},
          {"ge_half", r.ge_half},
          {"ge_half_right", r.ge_half_right},
          {"unique", r.unique}};
}

json to_json(UrnState s) { return {{"alpha", num(s.alpha())}, {"l", num(s.l())}}; }

json to_json(const EnvironmentSpec& env) {
  json j = {{"w0", to_json(env.w0)}, {"w_plus", to_json(env.w_plus)}};
  if (env.w_minus) j["w_minus"] = to_json(*env.w_minus);
  return j;
}

json to_json(const stats::MeanEstimate& m) {
  return {{"mean", num(m.mean)}, {"stderr", num(m.std_error)}, {"count", m.count}};
}

json to_json(const DriftEstimate& e) {
  json j = {{"mean", num(e.mean)},
            {"stderr", num(e.std_error)},
            {"N", e.truncation},
            {"regime", std::string(regime_name(e.regime))},
            {"method", std::string(method_name(e.method))},
            {"reason", e.reason},
            {"dp_value", num(e.dp_value)},
            {"mc_increment", num(e.mc_increment)},
            {"mc_stderr", num(e.mc_std_error)},
            {"replicas", e.replicas},
            {"tail",
             {{"model", e.tail_model},
              {"correction", num(e.tail_correction)},
              {"error", num(e.tail_error)},
              {"fitted_exponent", num(e.fitted_exponent)}}}};
  if (e.opposite_part) j["opposite_part"] = to_json(*e.opposite_part);
  if (e.pos_growth) j["pos_growth"] = num(*e.pos_growth);
  if (e.neg_growth) j["neg_growth"] = num(*e.neg_growth);
  return j;
}

json to_json(const PartsProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"N", r.n}, {"delta", to_json(r.delta)}, {"pos", to_json(r.pos)},
                    {"neg", to_json(r.neg)}});
  return {{"checkpoints", rows},
          {"pos_exponent", num(p.pos_exponent)},
          {"neg_exponent", num(p.neg_exponent)},
          {"pos_last_step", to_json(p.pos_last_step)},
          {"neg_last_step", to_json(p.neg_last_step)},
          {"delta_last_step", to_json(p.delta_last_step)}};
}

json to_json(const CltReport& c) {
  return {{"p", num(c.p)},         {"fprime", num(c.fprime)},
          {"target", num(c.target)}, {"variance", num(c.variance)},
          {"second_moment", num(c.second_moment)}, {"ratio", num(c.ratio)},
          {"retained", c.retained}, {"replicas", c.replicas}, {"n", c.n}};
}

json to_json(const SolomonReport& s) {
  return {{"beta_a", num(s.a)},
          {"beta_b", num(s.b)},
          {"criterion", num(s.criterion)},
          {"mc", to_json(s.mc)},
          {"N", s.horizon},
          {"verdict", std::string(verdict_name(s.verdict))},
          {"direction", s.direction}};
}

json to_json(const ClassificationVerdict& v) {
  json evidence = json::object();
  if (v.delta1) evidence["delta1"] = to_json(*v.delta1);
  if (v.delta_minus1) evidence["delta_minus1"] = to_json(*v.delta_minus1);
  if (v.report) evidence["fixed_points"] = to_json(*v.report);
  if (v.solomon) evidence["solomon"] = to_json(*v.solomon);
  json audit = json::array();
  for (const auto& a : v.audit)
    audit.push_back({{"rule", a.rule}, {"hypothesis", a.hypothesis}, {"ok", a.ok}});
  return {{"verdict", std::string(verdict_name(v.verdict))},
          {"rule", v.rule},
          {"detail", v.detail},
          {"evidence", evidence},
          {"audit", audit}};
}

json to_json(const Evaluation& e) {
  return {{"param", num(e.param)}, {"side", e.side}, {"estimate", to_json(e.estimate)}};
}

json to_json(const ThresholdResult& t) {
  json log = json::array();
  for (const auto& e : t.log) log.push_back(to_json(e));
  return {{"axis", std::string(axis_name(t.axis))},
          {"lo", num(t.lo)},
          {"hi", num(t.hi)},
          {"est_lo", to_json(t.est_lo)},
          {"est_hi", to_json(t.est_hi)},
          {"status", std::string(threshold_status_name(t.status))},
          {"detail", t.detail},
          {"log", log}};
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back({{"param", num(r.param)}, {"estimate", to_json(r.estimate)}});
  return {{"axis", std::string(axis_name(s.axis))}, {"rows", rows}, {"flags", s.flags}};
}

json to_json(const WalkOracle& o) {
  json dist = json::array();
  for (const auto& row : o.dist) {
    json r = json::array();
    for (double p : row) r.push_back(num(p));
    dist.push_back(r);
  }
  auto arr = [](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  return {{"horizon", o.horizon},  {"dist", dist},          {"total", arr(o.total)},
          {"E_M_plus", arr(o.m_plus)}, {"E_X_plus", arr(o.x_plus)}, {"E_D_plus", arr(o.d_plus)},
          {"E_U", arr(o.u)},       {"P_hit", arr(o.hit)}};
}

json to_json(const RegimeEvidence& e) {
  return {{"heuristic", true},
          {"return_fraction", num(e.return_fraction)},
          {"escape_fraction", num(e.escape_fraction)},
          {"mean_returns", num(e.mean_returns)},
          {"mean_max_level", num(e.mean_max_level)},
          {"right_fraction", num(e.right_fraction)},
          {"replicas", e.replicas},
          {"horizon", e.horizon},
          {"burn_in", e.burn_in}};
}

std::string coupled_csv(const CoupledRun& run) {
  std::ostringstream os;
  os << "n,alpha,beta,violation\n";
  for (std::size_t n = 0; n < run.violations.size(); ++n)
    os << n << ',' << fmt(run.first.states[n].alpha()) << ','
       << fmt(run.second.states[n].alpha()) << ',' << int(run.violations[n]) << '\n';
  return os.str();
}

std::string path_csv(const WalkRecord& rec) {
  std::ostringstream os;
  os << "k,X,site_alpha,site_l\n";
  for (std::size_t k = 0; k < rec.path.size(); ++k)
    os << k << ',' << rec.path[k] << ',' << fmt(rec.site_state[k].alpha()) << ','
       << fmt(rec.site_state[k].l()) << '\n';
  return os.str();
}

std::string trajectory_csv(const UrnTrajectory& t) {
  std::ostringstream os;
  os << "n,alpha,l,draw\n";
  for (std::size_t n = 0; n < t.states.size(); ++n) {
    os << n << ',' << fmt(t.states[n].alpha()) << ',' << fmt(t.states[n].l()) << ',';
    if (n > 0) os << (t.draws[n - 1] == Draw::Red ? 'R' : 'B');
    os << '\n';
  }
  return os.str();
}

std::string profile_csv(const PartsProfile& p) {
  std::ostringstream os;
  os << "N,mean,stderr,pos_part,neg_part\n";
  for (const auto& r : p.rows)
    os << r.n << ',' << fmt(r.delta.mean) << ',' << fmt(r.delta.std_error) << ','
       << fmt(r.pos.mean) << ',' << fmt(r.neg.mean) << '\n';
  return os.str();
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "param,mean,stderr,n_replicas,N_trunc\n";
  for (const auto& r : s.rows)
    os << fmt(r.param) << ',' << fmt(r.estimate.mean) << ',' << fmt(r.estimate.std_error) << ','
       << r.estimate.replicas << ',' << r.estimate.truncation << '\n';
  return os.str();
}

}  // namespace rrw::out
