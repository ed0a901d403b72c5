#include <cmath>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"
#include "mirrorforge/semiflat.hpp"
#include "mirrorforge/spectral.hpp"
#include "newton.hpp"
#include "small_linalg.hpp"

namespace mirrorforge {

using detail::SmallMatrix;

namespace {

SmallMatrix node_hessian(const Grid& grid, const PolynomialLift& lift, const ScalarField& state, std::size_t n) {
  const int m = grid.dimension();
  SmallMatrix H(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const Stencil st = hessian_stencil(grid, n, a, b);
      H(a, b) = lift.hessian(a, b) + st.apply(state.values().data()).real();
      H(b, a) = H(a, b);
    }
  return H;
}

std::vector<std::size_t> equation_nodes(const Grid& grid) {
  std::vector<std::size_t> nodes;
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    if (grid.periodic() || !grid.on_boundary(n)) nodes.push_back(n);
  return nodes;
}

}  // namespace

MongeAmpereResult solve_monge_ampere(const KahlerPotential& initial, double c, double tolerance,
                                     SolverOptions options) {
  if (!(c > 0.0)) throw InvalidArgument("Monge-Ampere constant must be positive");
  const Grid& grid = initial.grid();
  const int m = grid.dimension();
  const PolynomialLift& lift = initial.phi.lift();
  options.tolerance = tolerance;

  detail::NodalProblem problem;
  problem.nodes = equation_nodes(grid);
  problem.augmented = grid.periodic();
  problem.residual = [&](const ScalarField& state, std::vector<double>& r) {
    r.resize(problem.nodes.size());
    parallel_for(problem.nodes.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        r[i] = node_hessian(grid, lift, state, problem.nodes[i]).determinant() - c;
    });
  };
  problem.jacobian = [&](const ScalarField& state, std::vector<Eigen::Triplet<double>>& t) {
    for (std::size_t i = 0; i < problem.nodes.size(); ++i) {
      const std::size_t n = problem.nodes[i];
      const SmallMatrix adj = detail::adjugate(node_hessian(grid, lift, state, n));
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
          const double w = (a == b) ? adj(a, a) : adj(a, b) + adj(b, a);
          for (const auto& term : hessian_stencil(grid, n, a, b))
            t.emplace_back(static_cast<int>(i), static_cast<int>(term.node), w * term.weight);
        }
    }
  };
  problem.admissible = [&](const ScalarField& state) {
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      Eigen::LLT<SmallMatrix> llt(node_hessian(grid, lift, state, n));
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  };

  ScalarField state = initial.phi.remainder();
  const auto outcome = detail::newton_solve(state, problem, options, "solve_monge_ampere");

  MongeAmpereResult result{initial, outcome.diagnostics, c, c + outcome.shift};
  result.potential.phi.remainder() = std::move(state);
  result.potential.c = result.compatible_c;
  return result;
}

namespace {

// det(Q + spectral Hessian of the remainder) at every node.
std::vector<double> spectral_determinant(const LiftedField& phi) {
  const Grid& grid = phi.grid();
  if (!grid.periodic()) throw InvalidArgument("spectral Monge-Ampere quantities need a periodic grid");
  const int m = grid.dimension();
  const SpectralField psi(phi.remainder());
  std::vector<ScalarField> h;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> orders(m, 0);
      orders[a] += 1;
      orders[b] += 1;
      h.push_back(psi.derivative(orders));
    }
  std::vector<double> out(grid.node_count());
  SmallMatrix H(m, m);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) H(a, b) = phi.lift().hessian(a, b) + h[a * m + b][n].real();
    out[n] = H.determinant();
  }
  return out;
}

}  // namespace

double spectral_ma_defect(const KahlerPotential& potential) {
  double worst = 0.0;
  for (double d : spectral_determinant(potential.phi)) worst = std::max(worst, std::abs(d - potential.c));
  return worst;
}

double ma_truncation_error(const LiftedField& phi) {
  const std::vector<double> exact = spectral_determinant(phi);
  const ScalarField discrete = hessian_determinant(phi);
  double worst = 0.0;
  for (std::size_t n = 0; n < exact.size(); ++n) worst = std::max(worst, std::abs(discrete[n].real() - exact[n]));
  return worst;
}

}  // namespace mirrorforge
