#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrw/drift.hpp"
#include "rrw/funcs.hpp"
#include "rrw/walk.hpp"

namespace rrw {

enum class WeightMode { Directed, Undirected };

/// Site-homogeneous classical reinforcement weights. Directed walks use
/// (a_left, a_right) at every site; undirected walks use b0 on every edge.
struct ClassicalWeights {
  WeightMode mode = WeightMode::Directed;
  double a_left = 1.0;
  double a_right = 1.0;
  double b0 = 1.0;
  double delta = 1.0;
};

/// Both classical walks are generalized walks with f(x) = x. Throws
/// InvalidParameter for nonpositive weights or increment.
EnvironmentSpec map_classical_weights(const ClassicalWeights& w);

enum class Verdict { Recurrent, Transient, Inconclusive };

std::string_view verdict_name(Verdict v);

struct AuditEntry {
  std::string rule;
  std::string hypothesis;
  bool ok = false;
};

struct SolomonReport {
  double a = 0.0;  // Beta parameters of the limit proportion
  double b = 0.0;
  double criterion = 0.0;  // E[ln(alpha / (1 - alpha))] = psi(a) - psi(b)
  stats::MeanEstimate mc;  // empirical criterion at the horizon
  std::size_t horizon = 0;
  Verdict verdict = Verdict::Recurrent;
  int direction = 0;  // +1 transient to the right, -1 to the left
};

struct ClassificationVerdict {
  Verdict verdict = Verdict::Inconclusive;
  std::string rule;
  std::string detail;
  std::optional<FixedPointReport> report;
  std::optional<DriftEstimate> delta1;
  std::optional<DriftEstimate> delta_minus1;
  std::optional<SolomonReport> solomon;
  std::vector<AuditEntry> audit;
};

struct ClassifyBudget {
  DriftConfig drift{10000, 100000, 1000, 1, 0};
  double z = stats::kZ99;
  std::size_t solomon_replicas = 2000;
  std::size_t solomon_horizon = 100000;
};

/// Applies the recurrence/transience criteria in a fixed order and returns
/// the first rule whose hypotheses all hold and whose deciding inequality
/// clears the confidence margin. Every rule examined leaves audit entries.
ClassificationVerdict classify(const ReinforcementFunction& f, const EnvironmentSpec& env,
                               const ClassifyBudget& budget = {});

/// Rule names in evaluation order, each with its hypothesis wording.
struct RuleSpec {
  std::string rule;
  std::vector<std::string> hypotheses;
};
const std::vector<RuleSpec>& classification_rules();

struct SolomonConfig {
  std::size_t replicas = 2000;
  std::size_t horizon = 100000;
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
};

/// Closed form for f(x) = x with limit law Beta(l a, l (1 - a)), plus a
/// Monte Carlo estimate of E[ln(alpha_N / (1 - alpha_N))]. Throws NotLinear.
SolomonReport solomon_check(const ReinforcementFunction& f, UrnState init,
                            const SolomonConfig& config = {});

}  // namespace rrw
