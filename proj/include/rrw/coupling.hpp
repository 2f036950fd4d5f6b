#pragma once

#include <cstddef>
#include <string_view>

#include "rrw/funcs.hpp"
#include "rrw/rng.hpp"
#include "rrw/urn.hpp"

namespace rrw {

enum class CouplingKind { FunctionOrder, OffCenter, MassOrder };

std::string_view coupling_kind_name(CouplingKind k);

/// Two urns driven by one shared uniform sequence. `violations[n]` is 1 when
/// the dominance relation of the coupling fails at step n.
struct CoupledRun {
  CouplingKind kind = CouplingKind::FunctionOrder;
  UrnTrajectory first;
  UrnTrajectory second;
  std::vector<unsigned char> violations;  // length n + 1
  std::size_t violation_count = 0;
};

/// alpha_n <= beta_n where first follows f and second follows g, both Red iff
/// u < own value. Throws PreconditionOrder when f <= g fails on the grid.
CoupledRun couple_function_order(const ReinforcementFunction& f,
                                 const ReinforcementFunction& g, UrnState init,
                                 std::size_t n, Stream stream);

/// Mirror coupling of (alpha, 2l) and (1/2, 2l): an urn at x >= 1/2 draws Red
/// iff u <= f(x), at x < 1/2 iff u >= 1 - f(x). Checks |beta_n - 1/2| <=
/// |alpha_n - 1/2| and that the red masses differ by an integer.
/// Throws IntegralityViolation unless 2 alpha l - l is a nonnegative
/// integer, SymmetryViolation unless f is symmetric about 1/2.
CoupledRun couple_off_center(const ReinforcementFunction& f, double alpha, double l,
                             std::size_t n, Stream stream);

/// Mirror coupling of (1/2, 2 l1) (first) and (1/2, 2 l0) (second) with
/// l0 <= l1; checks |first - 1/2| <= |second - 1/2|.
/// Throws PreconditionOrder unless 0 < l0 <= l1; SymmetryViolation.
CoupledRun couple_mass_order(const ReinforcementFunction& f, double l0, double l1,
                             std::size_t n, Stream stream);

/// The mirror rule shared by the off-center and mass couplings.
inline bool mirror_draws_red(double alpha, double fx, double u) {
  return alpha >= 0.5 ? u <= fx : u >= 1.0 - fx;
}

}  // namespace rrw
