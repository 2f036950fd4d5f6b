#include "rrw/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rrw/coupling.hpp"
#include "rrw/criteria.hpp"
#include "rrw/drift.hpp"
#include "rrw/error.hpp"
#include "rrw/funcs.hpp"
#include "rrw/output.hpp"
#include "rrw/parallel.hpp"
#include "rrw/transition.hpp"
#include "rrw/urn.hpp"
#include "rrw/walk.hpp"

namespace rrw::cli {

using nlohmann::json;

namespace {

using P = ParamType;

Param seed() { return {"seed", P::Int, 1, "master seed"}; }
Param out() { return {"out", P::Text, "-", "output path, - for stdout"}; }
Param format() { return {"format", P::Text, "auto", "csv, json or auto"}; }
Param fn(const char* def) { return {"f", P::Text, def, "expression or builtin"}; }

std::vector<Param> with_common(std::vector<Param> ps) {
  ps.push_back(seed());
  ps.push_back(out());
  ps.push_back(format());
  return ps;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"urn",
       "simulate one urn or compute its exact law",
       with_common({fn("quartic(2)"),
                    {"alpha0", P::Real, 0.5, "initial proportion"},
                    {"l0", P::Real, 2.0, "initial mass"},
                    {"N", P::Int, 1000, "steps"},
                    {"exact", P::Flag, false, "exact law instead of a trajectory"},
                    {"stream", P::Int, 0, "stream id of the trajectory"}})},
      {"drift",
       "drift estimate, exact series, parts profile or CLT check",
       with_common({fn("quartic(2)"),
                    {"mode", P::Text, "estimate", "estimate, exact, profile or clt"},
                    {"alpha0", P::Real, 0.5, "initial proportion"},
                    {"l0", P::Real, 2.0, "initial mass"},
                    {"n_dp", P::Int, 10000, "exact horizon of the estimate"},
                    {"n_mc", P::Int, 100000, "Monte Carlo horizon of the estimate"},
                    {"replicas", P::Int, 1000, "Monte Carlo replicas"},
                    {"N", P::Int, 1000, "horizon of the exact series"},
                    {"horizon", P::Int, 100000, "profile horizon"},
                    {"checkpoints", P::Int, 15, "profile checkpoints"},
                    {"clt_n", P::Int, 10000, "CLT horizon"},
                    {"p", P::Real, "auto", "CLT fixed point, auto for the unique stable one"},
                    {"window", P::Real, 0.1, "CLT conditioning window"}})},
      {"walk",
       "simulate the walk, its functionals, the exact oracle or regime evidence",
       with_common({fn("const(0.5)"),
                    {"mode", P::Text, "simulate", "simulate, functionals, hitting, oracle or regime"},
                    {"env", P::Text, "w:0.5,2", "environment"},
                    {"stop", P::Text, "horizon", "horizon, level or either"},
                    {"N", P::Int, 10000, "horizon"},
                    {"level", P::Int, 1, "hitting level"},
                    {"levels", P::RealList, json::array({1, 2, 3}), "levels of the hitting mode"},
                    {"cap", P::Int, 100000000, "step cap"},
                    {"h", P::Int, 12, "oracle horizon"},
                    {"replicas", P::Int, 1000, "replicas"},
                    {"burn_in", P::Int, 1000, "burn-in of the regime evidence"},
                    {"stream", P::Int, 0, "stream id of a single walk"}})},
      {"couple",
       "run a coupled pair of urns",
       with_common({{"kind", P::Text, "function", "function, offcenter or mass"},
                    fn("quartic(1)"),
                    {"g", P::Text, "quartic(2)", "upper function of the order coupling"},
                    {"alpha0", P::Real, 0.5, "initial proportion (order coupling)"},
                    {"l0", P::Real, 1.0, "initial mass (order), smaller mass (mass coupling)"},
                    {"l1", P::Real, 2.0, "larger mass (mass coupling)"},
                    {"alpha", P::Real, 0.75, "off-center proportion"},
                    {"l", P::Real, 2.0, "off-center half mass"},
                    {"N", P::Int, 10000, "steps"},
                    {"streams", P::Int, 1, "number of streams"},
                    {"stream", P::Int, 0, "first stream id"}})},
      {"classify",
       "recurrence or transience verdict",
       with_common({fn("const(0.5)"),
                    {"env", P::Text, "w:0.5,2", "environment"},
                    {"n_dp", P::Int, 10000, "exact drift horizon"},
                    {"n_mc", P::Int, 100000, "Monte Carlo drift horizon"},
                    {"replicas", P::Int, 1000, "drift replicas"},
                    {"solomon_replicas", P::Int, 2000, "replicas of the linear check"},
                    {"solomon_N", P::Int, 100000, "horizon of the linear check"}})},
      {"solomon",
       "criterion for f(x) = x",
       with_common({fn("polya"),
                    {"alpha0", P::Real, 0.5, "initial proportion"},
                    {"l0", P::Real, 2.0, "initial mass"},
                    {"reds", P::Int, 0, "integer red count (with blues, overrides alpha0/l0)"},
                    {"blues", P::Int, 0, "integer blue count"},
                    {"replicas", P::Int, 2000, "replicas"},
                    {"N", P::Int, 100000, "horizon"}})},
      {"threshold",
       "bracket the crossing of E[delta_inf] = target",
       with_common({fn("quartic(2)"),
                    {"axis", P::Text, "u", "u or l"},
                    {"other", P::Real, 1.0, "l when scanning u, u when scanning l"},
                    {"lo", P::Real, 0.1, "range start"},
                    {"hi", P::Real, 64.0, "range end"},
                    {"target", P::Real, 1.0, "target value"},
                    {"rel_width", P::Real, 0.1, "bracket width relative to its midpoint"},
                    {"n_dp", P::Int, 10000, "exact drift horizon"},
                    {"n_mc", P::Int, 100000, "Monte Carlo drift horizon"},
                    {"replicas", P::Int, 256, "initial replicas"},
                    {"max_replicas", P::Int, 4096, "replica cap"},
                    {"max_evaluations", P::Int, 60, "evaluation cap"}})},
      {"sweep",
       "E[delta_inf] along a parameter grid",
       with_common({fn("quartic(2)"),
                    {"axis", P::Text, "u", "u or l"},
                    {"grid", P::RealList, json::array({0.5, 1, 2, 4, 8}), "sorted grid"},
                    {"other", P::Real, 1.0, "l when scanning u, u when scanning l"},
                    {"n_dp", P::Int, 10000, "exact drift horizon"},
                    {"n_mc", P::Int, 100000, "Monte Carlo drift horizon"},
                    {"replicas", P::Int, 1000, "replicas"}})},
      {"analyze",
       "fixed points and drift regime of f",
       with_common({fn("quartic(2)")})},
  };
  return cmds;
}

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::SchemaError, msg); }

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::UsageError, "--" + key + ": expected a number, got '" + text + "'");
}

long long parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::UsageError, "--" + key + ": expected an integer, got '" + text + "'");
}

json parse_list(const std::string& key, const std::string& text) {
  json arr = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) arr.push_back(parse_real(key, item));
  return arr;
}

json from_flag(const Param& p, const std::string& text) {
  switch (p.type) {
    case P::Int: return parse_int(p.name, text);
    case P::Real:
      if (p.def.is_string() && text == p.def.get<std::string>()) return text;
      return parse_real(p.name, text);
    case P::Text: return text;
    case P::Flag:
      if (text == "true" || text == "1" || text.empty()) return true;
      if (text == "false" || text == "0") return false;
      throw Error(ErrorKind::UsageError, "--" + p.name + ": expected true or false");
    case P::RealList: return parse_list(p.name, text);
  }
  return text;
}

json from_file(const Param& p, const json& v) {
  const std::string where = "$." + p.name;
  switch (p.type) {
    case P::Int:
      if (!v.is_number_integer()) schema(where + ": expected an integer");
      return v;
    case P::Real:
      if (v.is_string() && p.def.is_string() && v == p.def) return v;
      if (!v.is_number()) schema(where + ": expected a number");
      return v.get<double>();
    case P::Text:
      if (!v.is_string()) schema(where + ": expected a string");
      return v;
    case P::Flag:
      if (!v.is_boolean()) schema(where + ": expected a boolean");
      return v;
    case P::RealList:
      if (v.is_string()) return parse_list(p.name, v.get<std::string>());
      if (!v.is_array()) schema(where + ": expected an array of numbers");
      for (const auto& x : v)
        if (!x.is_number()) schema(where + ": expected an array of numbers");
      return v;
  }
  return v;
}

const Command& find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return c;
  throw Error(ErrorKind::UsageError, "unknown command '" + name + "'");
}

}  // namespace

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) schema("$: config must be a JSON object");
  return j;
}

json merge_config(const Command& cmd, const json& file,
                  const std::vector<std::pair<std::string, std::string>>& flags) {
  json cfg = json::object();
  for (const auto& p : cmd.params) cfg[p.name] = p.def;
  for (const auto& [key, value] : file.items()) {
    const auto it = std::find_if(cmd.params.begin(), cmd.params.end(),
                                 [&](const Param& p) { return p.name == key; });
    if (it == cmd.params.end()) schema("$." + key + ": unknown key for '" + cmd.name + "'");
    cfg[key] = from_file(*it, value);
  }
  for (const auto& [key, value] : flags) {
    const auto it = std::find_if(cmd.params.begin(), cmd.params.end(),
                                 [&](const Param& p) { return p.name == key; });
    if (it == cmd.params.end()) throw Error(ErrorKind::UsageError, "unknown flag --" + key);
    cfg[key] = from_flag(*it, value);
  }
  return cfg;
}

namespace {

struct Args {
  const json& c;

  double real(const char* k) const { return c.at(k).get<double>(); }
  long long integer(const char* k) const { return c.at(k).get<long long>(); }
  std::size_t count(const char* k) const {
    const long long v = integer(k);
    if (v < 0) throw Error(ErrorKind::InvalidParameter, std::string(k) + " must be >= 0");
    return static_cast<std::size_t>(v);
  }
  std::string text(const char* k) const { return c.at(k).get<std::string>(); }
  bool flag(const char* k) const { return c.at(k).get<bool>(); }
  std::vector<double> list(const char* k) const { return c.at(k).get<std::vector<double>>(); }
  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }
  ReinforcementFunction f(const char* k = "f") const { return ReinforcementFunction::parse(text(k)); }
};

// Output of one command: CSV body or JSON result, plus the exit status.
struct Result {
  std::optional<std::string> csv;
  json result;
  int exit_code = 0;
  std::optional<std::pair<std::string, std::string>> error;  // reported after output
};

std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_real(what, item));
  return v;
}

UrnState pair_state(const std::string& text) {
  const auto v = numbers(text, "env");
  if (v.size() != 2) throw Error(ErrorKind::UsageError, "env: expected alpha,l in '" + text + "'");
  return UrnState::make(v[0], v[1]);
}

// "w:a,l" | "w0:a,l;plus:a,l[;minus:a,l]" | "directed:al,ar,D" | "undirected:b0,D"
EnvironmentSpec parse_env(const std::string& text) {
  std::map<std::string, std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::UsageError, "env: missing ':' in '" + item + "'");
    parts[item.substr(0, colon)] = item.substr(colon + 1);
  }
  if (parts.size() == 1 && parts.count("w")) return EnvironmentSpec::homogeneous(pair_state(parts["w"]));
  if (parts.size() == 1 && parts.count("directed")) {
    const auto v = numbers(parts["directed"], "env");
    if (v.size() != 3) throw Error(ErrorKind::UsageError, "env: directed needs a_left,a_right,delta");
    return map_classical_weights({WeightMode::Directed, v[0], v[1], 1.0, v[2]});
  }
  if (parts.size() == 1 && parts.count("undirected")) {
    const auto v = numbers(parts["undirected"], "env");
    if (v.size() != 2) throw Error(ErrorKind::UsageError, "env: undirected needs b0,delta");
    return map_classical_weights({WeightMode::Undirected, 1.0, 1.0, v[0], v[1]});
  }
  if (!parts.count("w0") || !parts.count("plus"))
    throw Error(ErrorKind::UsageError, "env: expected w:a,l or w0:a,l;plus:a,l[;minus:a,l]");
  EnvironmentSpec env{pair_state(parts["w0"]), pair_state(parts["plus"]), std::nullopt};
  if (parts.count("minus")) env.w_minus = pair_state(parts["minus"]);
  if (parts.size() != (parts.count("minus") ? 3u : 2u))
    throw Error(ErrorKind::UsageError, "env: unknown part in '" + text + "'");
  return env;
}

Axis parse_axis(const std::string& s) {
  if (s == "u") return Axis::U;
  if (s == "l") return Axis::L;
  throw Error(ErrorKind::UsageError, "axis must be u or l");
}

Result cmd_urn(const Args& a) {
  const auto f = a.f();
  const auto init = UrnState::make(a.real("alpha0"), a.real("l0"));
  const std::size_t n = a.count("N");
  Result r;
  if (a.flag("exact")) {
    ExactUrnLaw law(f, init, n);
    std::ostringstream os;
    os << "n,k,prob\n";
    json rows = json::array();
    for (std::size_t m = 0; m <= n; ++m) {
      const auto row = law.row(m);
      json jr = json::array();
      for (std::size_t k = 0; k < row.size(); ++k) {
        os << m << ',' << k << ',' << out::fmt(row[k]) << '\n';
        jr.push_back(row[k]);
      }
      rows.push_back(jr);
    }
    r.csv = os.str();
    r.result = {{"horizon", n}, {"rows", rows}};
  } else {
    const auto t = simulate_urn(f, init, n, Stream(a.seed(), a.count("stream")));
    r.csv = out::trajectory_csv(t);
    json states = json::array();
    for (std::size_t m = 0; m < t.states.size(); ++m) {
      json s = out::to_json(t.states[m]);
      if (m > 0) s["draw"] = t.draws[m - 1] == Draw::Red ? "R" : "B";
      states.push_back(s);
    }
    r.result = {{"states", states}, {"seed", t.seed}, {"stream", t.stream_id}};
  }
  r.result["clamped_evaluations"] = f.clamp_count();
  return r;
}

Result cmd_drift(const Args& a) {
  const auto f = a.f();
  const auto init = UrnState::make(a.real("alpha0"), a.real("l0"));
  const std::string mode = a.text("mode");
  Result r;
  if (mode == "estimate") {
    DriftConfig dc{a.count("n_dp"), a.count("n_mc"), a.count("replicas"), a.seed(), 0};
    r.result = out::to_json(estimate_delta_inf(f, init, dc));
  } else if (mode == "exact") {
    const auto s = exact_drift_series(f, init, a.count("N"));
    std::ostringstream os;
    os << "N,mean,stderr,pos_part,neg_part\n";
    for (std::size_t m = 0; m < s.values.size(); ++m)
      os << m << ',' << out::fmt(s.values[m]) << ",0," << out::fmt(s.pos[m]) << ','
         << out::fmt(s.neg[m]) << '\n';
    r.csv = os.str();
    r.result = {{"mean", s.values}, {"pos", s.pos}, {"neg", s.neg}};
  } else if (mode == "profile") {
    ProfileConfig pc{a.count("horizon"), a.count("replicas"), a.count("checkpoints"), 0, a.seed()};
    const auto prof = drift_parts_profile(f, init, pc);
    r.csv = out::profile_csv(prof);
    r.result = out::to_json(prof);
  } else if (mode == "clt") {
    double p = 0.0;
    if (a.c.at("p").is_string()) {
      const auto rep = analyze(f);
      const auto stable = std::count_if(rep.points.begin(), rep.points.end(),
                                        [](const FixedPoint& fp) { return fp.stable; });
      if (stable != 1)
        throw Error(ErrorKind::HypothesisUnmet, "no unique stable fixed point; pass --p");
      p = std::find_if(rep.points.begin(), rep.points.end(),
                       [](const FixedPoint& fp) { return fp.stable; })->p;
    } else {
      p = a.real("p");
    }
    CltConfig cc{a.count("clt_n"), a.count("replicas"), a.real("window"), a.seed()};
    r.result = out::to_json(clt_check(f, p, init, cc));
  } else {
    throw Error(ErrorKind::UsageError, "drift mode must be estimate, exact, profile or clt");
  }
  return r;
}

StopRule parse_stop(const Args& a) {
  StopRule s;
  const std::string kind = a.text("stop");
  if (kind == "horizon")
    s.kind = StopKind::Horizon;
  else if (kind == "level")
    s.kind = StopKind::HitLevel;
  else if (kind == "either")
    s.kind = StopKind::HitEither;
  else
    throw Error(ErrorKind::UsageError, "stop must be horizon, level or either");
  s.horizon = a.count("N");
  s.level = a.integer("level");
  s.cap = a.count("cap");
  return s;
}

Result cmd_walk(const Args& a) {
  const auto f = a.f();
  const auto env = parse_env(a.text("env"));
  const std::string mode = a.text("mode");
  Result r;
  if (mode == "simulate" || mode == "functionals") {
    const StopRule stop = parse_stop(a);
    const auto rec = simulate_walk(f, env, stop, Stream(a.seed(), a.count("stream")));
    const std::string status = rec.status == WalkStatus::CapReached ? "CapReached" : "Completed";
    if (mode == "simulate") {
      r.csv = out::path_csv(rec);
      r.result = {{"status", status}, {"steps", rec.steps()}, {"path", rec.path}};
    } else {
      const auto fn = walk_functionals(f, rec, a.integer("level"));
      json t_a = fn.t_a ? json(*fn.t_a) : json(nullptr);
      r.result = {{"T_a", t_a},
                  {"U_Ta", fn.t_a ? json(fn.u_ta) : json(nullptr)},
                  {"Dplus_Ta", fn.t_a ? out::num(fn.dplus_ta) : json(nullptr)},
                  {"M_series_ref", "series.M"},
                  {"status", status},
                  {"series", {{"U", fn.u}, {"Xplus", fn.xplus}, {"Dplus", fn.dplus}, {"M", fn.m}}}};
    }
    if (rec.status == WalkStatus::CapReached) {
      r.exit_code = 4;
      r.error = {"CapReached", "step cap reached before the stop rule"};
    }
  } else if (mode == "hitting") {
    std::vector<std::int64_t> levels;
    for (double v : a.list("levels")) levels.push_back(static_cast<std::int64_t>(v));
    const std::size_t reps = a.count("replicas");
    const auto cap = a.count("cap");
    const auto runs = parallel_map<std::vector<HitSample>>(reps, [&](std::size_t i) {
      return hitting_functionals(f, env, levels, cap, Stream(a.seed(), i));
    });
    json rows = json::array();
    for (std::size_t j = 0; j < levels.size(); ++j) {
      std::vector<double> u(reps), d(reps), s(reps);
      std::size_t missed = 0;
      for (std::size_t i = 0; i < reps; ++i) {
        u[i] = static_cast<double>(runs[i][j].u);
        d[i] = runs[i][j].dplus;
        s[i] = u[i] + d[i];
        missed += !runs[i][j].hit;
      }
      rows.push_back({{"a", levels[j]},
                      {"U", out::to_json(stats::mean_stderr(u))},
                      {"Dplus", out::to_json(stats::mean_stderr(d))},
                      {"U_plus_Dplus", out::to_json(stats::mean_stderr(s))},
                      {"capped", missed}});
    }
    r.result = {{"levels", rows}, {"replicas", reps}, {"cap", cap}};
  } else if (mode == "oracle") {
    r.result = out::to_json(exact_walk_oracle(f, env, a.count("h")));
  } else if (mode == "regime") {
    RegimeConfig rc{a.count("N"), a.count("burn_in"), a.count("replicas"), a.seed()};
    r.result = out::to_json(empirical_regime(f, env, rc));
  } else {
    throw Error(ErrorKind::UsageError,
                "walk mode must be simulate, functionals, hitting, oracle or regime");
  }
  r.result["environment"] = out::to_json(env);
  return r;
}

Result cmd_couple(const Args& a) {
  const std::string kind = a.text("kind");
  const auto f = a.f();
  const std::size_t n = a.count("N");
  const std::size_t streams = std::max<std::size_t>(1, a.count("streams"));
  const std::size_t first = a.count("stream");
  std::function<CoupledRun(Stream)> one;
  if (kind == "function") {
    const auto g = a.f("g");
    const auto init = UrnState::make(a.real("alpha0"), a.real("l0"));
    one = [=](Stream s) { return couple_function_order(f, g, init, n, s); };
  } else if (kind == "offcenter") {
    const double alpha = a.real("alpha"), l = a.real("l");
    one = [=](Stream s) { return couple_off_center(f, alpha, l, n, s); };
  } else if (kind == "mass") {
    const double l0 = a.real("l0"), l1 = a.real("l1");
    one = [=](Stream s) { return couple_mass_order(f, l0, l1, n, s); };
  } else {
    throw Error(ErrorKind::UsageError, "kind must be function, offcenter or mass");
  }
  Result r;
  if (streams == 1) {
    const auto run = one(Stream(a.seed(), first));
    r.csv = out::coupled_csv(run);
    r.result = {{"kind", std::string(coupling_kind_name(run.kind))},
                {"violations", run.violation_count},
                {"steps", n}};
  } else {
    // Preconditions are checked once, outside the workers.
    one(Stream(a.seed(), first));
    const auto counts = parallel_map<std::size_t>(streams, [&](std::size_t i) {
      return one(Stream(a.seed(), first + i)).violation_count;
    });
    std::size_t total = 0;
    json bad = json::array();
    for (std::size_t i = 0; i < streams; ++i) {
      total += counts[i];
      if (counts[i] > 0) bad.push_back(first + i);
    }
    r.result = {{"kind", kind}, {"streams", streams}, {"steps", n},
                {"violations", total}, {"violating_streams", bad}};
  }
  return r;
}

Result cmd_classify(const Args& a) {
  ClassifyBudget b;
  b.drift = {a.count("n_dp"), a.count("n_mc"), a.count("replicas"), a.seed(), 0};
  b.solomon_replicas = a.count("solomon_replicas");
  b.solomon_horizon = a.count("solomon_N");
  Result r;
  const auto env = parse_env(a.text("env"));
  r.result = out::to_json(classify(a.f(), env, b));
  r.result["environment"] = out::to_json(env);
  return r;
}

Result cmd_solomon(const Args& a) {
  UrnState init;
  const long long reds = a.integer("reds"), blues = a.integer("blues");
  if (reds > 0 || blues > 0) {
    if (reds <= 0 || blues <= 0)
      throw Error(ErrorKind::InvalidParameter, "ball counts must both be positive");
    init = {static_cast<double>(reds), static_cast<double>(reds + blues)};
  } else {
    init = UrnState::make(a.real("alpha0"), a.real("l0"));
  }
  SolomonConfig sc;
  sc.replicas = a.count("replicas");
  sc.horizon = a.count("N");
  sc.seed = a.seed();
  Result r;
  r.result = out::to_json(solomon_check(a.f(), init, sc));
  return r;
}

Result cmd_threshold(const Args& a) {
  ThresholdConfig c;
  c.axis = parse_axis(a.text("axis"));
  c.other = a.real("other");
  c.lo = a.real("lo");
  c.hi = a.real("hi");
  c.target = a.real("target");
  c.rel_width = a.real("rel_width");
  c.n_dp = a.count("n_dp");
  c.n_mc = a.count("n_mc");
  c.replicas = std::max<std::size_t>(1, a.count("replicas"));
  c.max_replicas = a.count("max_replicas");
  c.max_evaluations = a.count("max_evaluations");
  c.seed = a.seed();
  const auto t = find_threshold(a.f(), c);
  Result r;
  r.result = out::to_json(t);
  switch (t.status) {
    case ThresholdStatus::Bracketed: break;
    case ThresholdStatus::NoCrossing:
      r.exit_code = 3;
      r.error = {"NoCrossing", t.detail};
      break;
    case ThresholdStatus::MonotonicityViolation:
      r.exit_code = 3;
      r.error = {"MonotonicityViolation", t.detail};
      break;
    case ThresholdStatus::BudgetExhausted:
      r.exit_code = 4;
      r.error = {"BudgetExhausted", t.detail};
      break;
  }
  return r;
}

Result cmd_sweep(const Args& a) {
  DriftConfig dc{a.count("n_dp"), a.count("n_mc"), a.count("replicas"), a.seed(), 0};
  const auto s = sweep(a.f(), parse_axis(a.text("axis")), a.list("grid"), a.real("other"), dc);
  Result r;
  r.csv = out::sweep_csv(s);
  r.result = out::to_json(s);
  return r;
}

Result cmd_analyze(const Args& a) {
  const auto f = a.f();
  Result r;
  const auto rep = analyze(f);
  r.result = out::to_json(rep);
  const auto d = decide_regime(rep);
  r.result["regime"] = std::string(regime_name(d.regime));
  r.result["regime_reason"] = d.reason;
  r.result["symmetric"] = is_symmetric(f);
  r.result["printed"] = f.print();
  return r;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::InvalidParameter:
    case ErrorKind::SchemaError:
    case ErrorKind::UsageError:
      return 2;
    case ErrorKind::BudgetExhausted:
    case ErrorKind::HorizonTooLarge:
      return 4;
    default:
      return 3;
  }
}

void report(std::ostream& err, const std::string& name, const std::string& detail) {
  err << json{{"error", name}, {"detail", detail}}.dump() << '\n';
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::UsageError, "cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rrw: generalized reinforced random walks and urns", "rrw"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_paths[cmd.name], "JSON config file");
    for (const auto& p : cmd.params) {
      auto& slot = raw[cmd.name][p.name];
      CLI::Option* opt = nullptr;
      if (p.type == P::Flag) {
        opt = sub->add_flag("--" + p.name + "{true}", slot, p.help);
      } else {
        opt = sub->add_option("--" + p.name, slot, p.help);
      }
      options[cmd.name].emplace_back(p.name, opt);
    }
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      const auto subs = app.get_subcommands();
      out << (subs.empty() ? app.help() : subs.front()->help());
    } else {
      out << kVersion << "\n";
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "UsageError", e.what());
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const Command& cmd = find_command(sub->get_name());
  try {
    json file = json::object();
    if (!config_paths[cmd.name].empty()) file = load_config(config_paths[cmd.name]);
    std::vector<std::pair<std::string, std::string>> flags;
    for (const auto& [name, opt] : options[cmd.name])
      if (opt->count() > 0) flags.emplace_back(name, raw[cmd.name][name]);
    const json cfg = merge_config(cmd, file, flags);
    const Args a{cfg};
    std::string fmt_choice = a.text("format");
    if (fmt_choice != "auto" && fmt_choice != "csv" && fmt_choice != "json")
      throw Error(ErrorKind::UsageError, "format must be csv, json or auto");

    Result r;
    if (cmd.name == "urn") r = cmd_urn(a);
    else if (cmd.name == "drift") r = cmd_drift(a);
    else if (cmd.name == "walk") r = cmd_walk(a);
    else if (cmd.name == "couple") r = cmd_couple(a);
    else if (cmd.name == "classify") r = cmd_classify(a);
    else if (cmd.name == "solomon") r = cmd_solomon(a);
    else if (cmd.name == "threshold") r = cmd_threshold(a);
    else if (cmd.name == "sweep") r = cmd_sweep(a);
    else r = cmd_analyze(a);

    const bool csv = fmt_choice == "csv" || (fmt_choice == "auto" && r.csv);
    if (csv && !r.csv) throw Error(ErrorKind::UsageError, "no CSV view for this output");
    std::string text;
    if (csv) {
      text = std::string("# rrw ") + kVersion + "\n# command: " + cmd.name +
             "\n# config: " + cfg.dump() + "\n" + *r.csv;
    } else {
      json env = {{"provenance", {{"version", kVersion}, {"command", cmd.name}, {"config", cfg}}},
                  {"result", r.result}};
      text = env.dump(2) + "\n";
    }
    emit(text, a.text("out"), out);
    if (r.error) report(err, r.error->first, r.error->second);
    return r.exit_code;
  } catch (const Error& e) {
    report(err, std::string(e.name()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace rrw::cli
