#pragma once

#include <json.hpp>
#include <string>

#include "rrw/coupling.hpp"
#include "rrw/criteria.hpp"
#include "rrw/drift.hpp"
#include "rrw/funcs.hpp"
#include "rrw/transition.hpp"
#include "rrw/walk.hpp"

namespace rrw::out {

using nlohmann::json;

/// %.17g, with inf written as +inf / -inf and NaN as nan.
std::string fmt(double v);

/// Finite doubles as numbers, infinities as "+inf" / "-inf", NaN as null.
json num(double v);

json to_json(const FixedPointReport& r);
json to_json(UrnState s);
json to_json(const EnvironmentSpec& env);
json to_json(const stats::MeanEstimate& m);
json to_json(const DriftEstimate& e);
json to_json(const PartsProfile& p);
json to_json(const CltReport& c);
json to_json(const SolomonReport& s);
json to_json(const ClassificationVerdict& v);
json to_json(const Evaluation& e);
json to_json(const ThresholdResult& t);
json to_json(const SweepResult& s);
json to_json(const WalkOracle& o);
json to_json(const RegimeEvidence& e);

/// Rows `n,alpha,beta,violation`.
std::string coupled_csv(const CoupledRun& run);
/// Rows `k,X,site_alpha,site_l`.
std::string path_csv(const WalkRecord& rec);
/// Rows `n,alpha,l,draw`.
std::string trajectory_csv(const UrnTrajectory& t);
/// Rows `N,mean,stderr,pos_part,neg_part`.
std::string profile_csv(const PartsProfile& p);
/// Rows `param,mean,stderr,n_replicas,N_trunc`.
std::string sweep_csv(const SweepResult& s);

}  // namespace rrw::out
