#include "newton.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "mirrorforge/error.hpp"

namespace mirrorforge::detail {

namespace {

double max_norm(const std::vector<double>& r, double shift) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v - shift));
  return m;
}

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const SolverOptions& options, const std::string& what) {
  const bool direct = options.linear_solver == LinearSolver::SparseLU ||
                      (options.linear_solver == LinearSolver::Auto && A.rows() <= options.direct_limit);
  if (direct) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw DivergenceError(what + ": singular Newton Jacobian");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw DivergenceError(what + ": linear solve failed");
    return x;
  }
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
  it.preconditioner().setDroptol(1e-3);
  it.preconditioner().setFillfactor(5);
  it.setTolerance(1e-13);
  it.setMaxIterations(2000);
  it.compute(A);
  if (it.info() != Eigen::Success) throw DivergenceError(what + ": preconditioner setup failed");
  Eigen::VectorXd x = it.solve(b);
  if (it.info() != Eigen::Success && it.error() > 1e-8)
    throw DivergenceError(what + ": iterative linear solve did not converge");
  return x;
}

}  // namespace

NewtonOutcome newton_solve(ScalarField& state, const NodalProblem& problem, const SolverOptions& options,
                           const std::string& what) {
  const std::size_t nu = problem.nodes.size();
  const std::size_t nodes = state.grid().node_count();
  std::vector<long> column(nodes, -1);
  for (std::size_t i = 0; i < nu; ++i) column[problem.nodes[i]] = static_cast<long>(i);
  const std::size_t dim = nu + (problem.augmented ? 1 : 0);

  if (problem.admissible && !problem.admissible(state))
    throw ConvexityError(what + ": initial state is not admissible (Hessian not positive definite)");

  NewtonOutcome out;
  std::vector<double> r;
  problem.residual(state, r);
  double shift = 0.0;
  if (problem.augmented) {
    double mean = 0.0;
    for (double v : r) mean += v;
    shift = mean / static_cast<double>(r.size());
  }
  double norm = max_norm(r, shift);
  out.diagnostics.history.push_back(norm);

  std::vector<Eigen::Triplet<double>> triplets;
  int step = 0;
  while (norm > options.tolerance) {
    if (step >= options.max_steps)
      throw DivergenceError(what + ": no convergence after " + std::to_string(options.max_steps) +
                            " Newton steps (residual " + std::to_string(norm) + ")");
    triplets.clear();
    problem.jacobian(state, triplets);
    std::vector<Eigen::Triplet<double>> mapped;
    mapped.reserve(triplets.size() + 2 * nu);
    for (const auto& t : triplets) {
      const long c = column[static_cast<std::size_t>(t.col())];
      if (c >= 0) mapped.emplace_back(t.row(), static_cast<int>(c), t.value());
    }
    Eigen::VectorXd rhs(dim);
    for (std::size_t i = 0; i < nu; ++i) rhs[i] = -(r[i] - shift);
    if (problem.augmented) {
      for (std::size_t i = 0; i < nu; ++i) {
        mapped.emplace_back(static_cast<int>(i), static_cast<int>(nu), -1.0);
        mapped.emplace_back(static_cast<int>(nu), static_cast<int>(i), 1.0);
      }
      rhs[nu] = 0.0;
    }
    Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    J.setFromTriplets(mapped.begin(), mapped.end());
    J.makeCompressed();
    const Eigen::VectorXd delta = solve_linear(J, rhs, options, what);

    double alpha = 1.0;
    bool accepted = false;
    ScalarField trial = state;
    std::vector<double> rt;
    for (int h = 0; h <= options.max_halvings; ++h, alpha *= 0.5) {
      trial = state;
      for (std::size_t i = 0; i < nu; ++i) trial[problem.nodes[i]] += alpha * delta[i];
      const double trial_shift = problem.augmented ? shift + alpha * delta[nu] : 0.0;
      if (problem.admissible && !problem.admissible(trial)) continue;
      problem.residual(trial, rt);
      const double tn = max_norm(rt, trial_shift);
      if (tn < norm) {
        state = std::move(trial);
        r.swap(rt);
        shift = trial_shift;
        norm = tn;
        accepted = true;
        break;
      }
    }
    ++step;
    out.diagnostics.history.push_back(norm);
    if (!accepted) {
      bool admissible = true;
      if (problem.admissible) {
        ScalarField probe = state;
        for (std::size_t i = 0; i < nu; ++i) probe[problem.nodes[i]] += std::ldexp(1.0, -options.max_halvings) * delta[i];
        admissible = problem.admissible(probe);
      }
      if (!admissible) throw ConvexityError(what + ": every damped step loses convexity");
      throw DivergenceError(what + ": line search failed to reduce the residual (" + std::to_string(norm) + ")");
    }
  }
  out.diagnostics.steps = step;
  out.diagnostics.residual = norm;
  out.diagnostics.converged = true;
  out.shift = shift;
  return out;
}

}  // namespace mirrorforge::detail
