#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "mirrorforge/field.hpp"
#include "mirrorforge/solver.hpp"

namespace mirrorforge::detail {

// Nodal Newton problem: unknowns are field values at a set of nodes, one equation per
// unknown node. On periodic grids the system is augmented with a constant shift s
// (equations read R(u) = s) and the gauge row sum(u - u0) = 0.
struct NodalProblem {
  std::vector<std::size_t> nodes;
  bool augmented = false;
  // Residual at each node of `nodes`.
  std::function<void(const ScalarField& state, std::vector<double>& residual)> residual;
  // Triplets (equation index, grid node, dR/du). Columns of fixed nodes are dropped.
  std::function<void(const ScalarField& state, std::vector<Eigen::Triplet<double>>& triplets)> jacobian;
  // Throws (or returns false) when a state is not admissible, e.g. not convex.
  std::function<bool(const ScalarField& state)> admissible;
};

struct NewtonOutcome {
  SolverDiagnostics diagnostics;
  double shift = 0.0;
};

NewtonOutcome newton_solve(ScalarField& state, const NodalProblem& problem, const SolverOptions& options,
                           const std::string& what);

}  // namespace mirrorforge::detail
