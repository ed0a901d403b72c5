#pragma once

#include <string>
#include <vector>

namespace mirrorforge {

enum class LinearSolver { Auto, SparseLU, BiCGSTAB };

struct SolverOptions {
  double tolerance = 1e-10;
  int max_steps = 50;
  int max_halvings = 30;
  LinearSolver linear_solver = LinearSolver::Auto;
  // Auto switches from the direct solver to preconditioned BiCGSTAB above this size.
  int direct_limit = 9000;
};

struct SolverDiagnostics {
  int steps = 0;
  double residual = 0.0;
  std::vector<double> history;
  bool converged = false;
};

}  // namespace mirrorforge
