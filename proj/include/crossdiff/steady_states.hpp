#pragma once

#include <string>
#include <vector>

#include "crossdiff/model.hpp"

namespace crossdiff {

enum class StateClass { Trivial, Semitrivial, Nontrivial };
std::string to_string(StateClass c);

/// Bit i set <=> component i is nonzero.
using SupportMask = unsigned;

struct ConstantState {
  Vector u_star;
  SupportMask support = 0;
  StateClass classification = StateClass::Trivial;
  double residual = 0.0;  ///< max_i |u_i g_i(u)|

  std::vector<int> support_indices(int m) const;
  std::vector<int> complement_indices(int m) const;
};

/// A support subset whose restricted interaction matrix c|_S is singular.
struct DegenerateSubset {
  SupportMask support = 0;
  std::string reason;
};

struct SteadyStateSet {
  std::vector<ConstantState> states;  ///< sorted by support mask
  std::vector<DegenerateSubset> degenerate;
};

StateClass classify_support(SupportMask support, int m);

/// Exhaustive enumeration over all 2^m supports (m <= 12). For each support S
/// the linear system c|_S u_S = r|_S is solved; only strictly positive
/// solutions are kept, roots on the orthant boundary belong to a smaller
/// support and are found there.
SteadyStateSet find_constant_states(const Model& model);

/// Damped Newton on g|_S starting at u0 (which must vanish off the support).
/// Throws SolverError on non-convergence or when the iterate leaves the orthant.
ConstantState refine_root(const Model& model, SupportMask support, const Vector& u0,
                          int max_iter = 50);

}  // namespace crossdiff
