#include "mirrorforge/acycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"
#include "mirrorforge/random.hpp"
#include "newton.hpp"
#include "small_linalg.hpp"

namespace mirrorforge {

using detail::SmallComplexMatrix;

SectionCycle::SectionCycle(std::shared_ptr<const SemiFlatGeometry> geometry, LiftedField f, double theta)
    : geometry_(std::move(geometry)), f_(std::move(f)), theta_(theta) {
  if (!geometry_) throw InvalidArgument("SectionCycle needs a geometry");
  require_same_grid(f_.grid(), geometry_->grid(), "SectionCycle");
  const int m = dimension();
  for (int k = 0; k < m; ++k) grad_.push_back(f_.gradient(k));
  for (int j = 0; j < m; ++j) {
    ScalarField y(f_.grid(), "y" + std::to_string(j + 1));
    for (int k = 0; k < m; ++k) y += geometry_->inverse_hessian(j, k) * grad_[k];
    y_.push_back(std::move(y));
  }
}

std::vector<ScalarField> covariant_hessian(const LiftedField& f, const SemiFlatGeometry& geometry) {
  require_same_grid(f.grid(), geometry.grid(), "covariant_hessian");
  const int m = f.dimension();
  std::vector<ScalarField> grad;
  for (int q = 0; q < m; ++q) grad.push_back(f.gradient(q));
  std::vector<ScalarField> out(static_cast<std::size_t>(m * m), ScalarField(f.grid()));
  for (int l = 0; l < m; ++l)
    for (int k = l; k < m; ++k) {
      ScalarField h = f.hessian(l, k);
      for (int q = 0; q < m; ++q) h -= geometry.christoffel(q, l, k) * grad[q];
      out[l * m + k] = h;
      out[k * m + l] = h;
    }
  return out;
}

namespace {

Complex phase(double theta) { return std::polar(1.0, -theta); }

// g + i Hess f at a node, from stencils on the remainder of f.
SmallComplexMatrix slag_matrix(const SemiFlatGeometry& geo, const LiftedField& f, const ScalarField& rem,
                               std::size_t n, std::span<double> x) {
  const Grid& grid = geo.grid();
  const int m = grid.dimension();
  grid.coordinates(n, x);
  std::array<double, Domain::kMaxDimension> df{};
  for (int q = 0; q < m; ++q)
    df[q] = f.lift().derivative(x, q) + first_derivative_stencil(grid, n, q).apply(rem.values().data()).real();
  SmallComplexMatrix M(m, m);
  for (int l = 0; l < m; ++l)
    for (int k = l; k < m; ++k) {
      double h = f.lift().hessian(l, k) + hessian_stencil(grid, n, l, k).apply(rem.values().data()).real();
      for (int q = 0; q < m; ++q) h -= geo.christoffel(q, l, k)[n].real() * df[q];
      M(l, k) = Complex(geo.hessian(l, k)[n].real(), h);
      M(k, l) = Complex(geo.hessian(k, l)[n].real(), h);
    }
  return M;
}

}  // namespace

ScalarField slag_residual(const SectionCycle& cycle) {
  const SemiFlatGeometry& geo = cycle.geometry();
  const int m = cycle.dimension();
  const auto H = covariant_hessian(cycle.potential(), geo);
  const Complex e = phase(cycle.theta());
  ScalarField out(geo.grid(), "slag_residual");
  SmallComplexMatrix M(m, m);
  for (std::size_t n = 0; n < out.size(); ++n) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) M(a, b) = Complex(geo.hessian(a, b)[n].real(), H[a * m + b][n].real());
    out[n] = (e * M.determinant()).imag();
  }
  return out;
}

double lagrangian_residual(const SectionCycle& cycle) {
  const SemiFlatGeometry& geo = cycle.geometry();
  const int m = cycle.dimension();
  std::vector<ScalarField> lambda;
  for (int i = 0; i < m; ++i) {
    ScalarField s(geo.grid());
    for (int j = 0; j < m; ++j) s += geo.hessian(i, j) * cycle.section(j);
    lambda.push_back(std::move(s));
  }
  // For a potential-defined section phi_ij y^j = d_i f; its differential measures the failure.
  return exterior_derivative(DifferentialForm::one_form(lambda, m)).max_abs();
}

SlagResult solve_slag_section(std::shared_ptr<const SemiFlatGeometry> geometry, double theta,
                              const LiftedField& initial, double tolerance, SolverOptions options) {
  if (!geometry) throw InvalidArgument("solve_slag_section needs a geometry");
  const SemiFlatGeometry& geo = *geometry;
  const Grid& grid = geo.grid();
  require_same_grid(initial.grid(), grid, "solve_slag_section");
  const int m = grid.dimension();
  const Complex e = phase(theta);
  options.tolerance = tolerance;

  detail::NodalProblem problem;
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    if (grid.periodic() || !grid.on_boundary(n)) problem.nodes.push_back(n);
  problem.augmented = grid.periodic();
  problem.residual = [&](const ScalarField& state, std::vector<double>& r) {
    r.resize(problem.nodes.size());
    parallel_for(problem.nodes.size(), [&](std::size_t begin, std::size_t end) {
      std::vector<double> x(m);
      for (std::size_t i = begin; i < end; ++i)
        r[i] = (e * slag_matrix(geo, initial, state, problem.nodes[i], x).determinant()).imag();
    });
  };
  problem.jacobian = [&](const ScalarField& state, std::vector<Eigen::Triplet<double>>& t) {
    std::vector<double> x(m);
    for (std::size_t i = 0; i < problem.nodes.size(); ++i) {
      const std::size_t n = problem.nodes[i];
      const SmallComplexMatrix adj = detail::adjugate(slag_matrix(geo, initial, state, n, x));
      // dR = Im(e * sum_lk adj(k,l) * i dH_lk)
      std::array<double, Domain::kMaxDimension * Domain::kMaxDimension> c{};
      for (int l = 0; l < m; ++l)
        for (int k = 0; k < m; ++k) c[l * m + k] = (e * Complex(0.0, 1.0) * adj(k, l)).imag();
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
          const double w = (a == b) ? c[a * m + a] : c[a * m + b] + c[b * m + a];
          for (const auto& term : hessian_stencil(grid, n, a, b))
            t.emplace_back(static_cast<int>(i), static_cast<int>(term.node), w * term.weight);
        }
      for (int q = 0; q < m; ++q) {
        double w = 0.0;
        for (int l = 0; l < m; ++l)
          for (int k = 0; k < m; ++k) w -= c[l * m + k] * geo.christoffel(q, l, k)[n].real();
        if (w == 0.0) continue;
        for (const auto& term : first_derivative_stencil(grid, n, q))
          t.emplace_back(static_cast<int>(i), static_cast<int>(term.node), w * term.weight);
      }
    }
  };
  problem.admissible = [&](const ScalarField& state) {
    std::vector<double> x(m);
    for (std::size_t n : problem.nodes)
      if (!((e * slag_matrix(geo, initial, state, n, x).determinant()).real() > 0.0)) return false;
    return true;
  };

  ScalarField state = initial.remainder();
  detail::NewtonOutcome outcome;
  try {
    outcome = detail::newton_solve(state, problem, options, "solve_slag_section");
  } catch (const ConvexityError& err) {
    throw ConvexityError(std::string(err.what()) + " [lost ellipticity: Re e^{-i theta} det(g + i Hess f) <= 0]");
  }
  if (grid.periodic()) state += -state.mean();
  LiftedField f(initial.lift(), std::move(state));
  SlagResult result{SectionCycle(std::move(geometry), std::move(f), theta), outcome.diagnostics, outcome.shift};
  return result;
}

ConnectionOnC::ConnectionOnC(std::vector<MatrixField> E) : E_(std::move(E)) {
  if (E_.empty()) throw InvalidArgument("connection needs at least one component");
  if (static_cast<int>(E_.size()) != E_.front().grid().dimension())
    throw InvalidArgument("connection needs one matrix field per base axis");
  for (const auto& e : E_) {
    require_same_grid(e.grid(), E_.front().grid(), "ConnectionOnC");
    if (e.rank() != E_.front().rank()) throw InvalidArgument("connection components have different ranks");
  }
}

ConnectionOnC ConnectionOnC::from_potential(const LiftedField& e) {
  std::vector<MatrixField> E;
  for (int k = 0; k < e.dimension(); ++k) E.emplace_back(e.gradient(k).real_part());
  return ConnectionOnC(std::move(E));
}

ConnectionOnC ConnectionOnC::zero(const Grid& grid, int rank) {
  return ConnectionOnC(std::vector<MatrixField>(grid.dimension(), MatrixField(grid, rank)));
}

ConnectionOnC ConnectionOnC::random(const Grid& grid, int rank, std::uint64_t seed, int max_mode, double amplitude) {
  if (rank < 1) throw InvalidArgument("connection rank must be positive");
  const int m = grid.dimension();
  Xorshift64Star rng(seed);
  // Modes n in [-K, K]^m whose first non-zero entry is positive, plus n = 0, in
  // lexicographic order of (n_1, ..., n_m) with n_1 slowest.
  std::vector<std::vector<int>> modes;
  std::vector<int> n(m, -max_mode);
  for (;;) {
    int first = 0;
    for (int a = 0; a < m && first == 0; ++a) first = n[a];
    if (first >= 0 && (first > 0 || std::all_of(n.begin(), n.end(), [](int v) { return v == 0; }))) modes.push_back(n);
    int a = m - 1;
    while (a >= 0 && n[a] == max_mode) n[a--] = -max_mode;
    if (a < 0) break;
    ++n[a];
  }
  auto hermitian = [&] {
    Eigen::MatrixXcd h(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = i; j < rank; ++j) {
        const double re = rng.uniform(-amplitude, amplitude);
        const double im = (i == j) ? 0.0 : rng.uniform(-amplitude, amplitude);
        h(i, j) = Complex(re, im);
        h(j, i) = std::conj(h(i, j));
      }
    return h;
  };
  std::vector<MatrixField> E;
  std::vector<double> x(m);
  for (int k = 0; k < m; ++k) {
    MatrixField field(grid, rank);
    for (const auto& mode : modes) {
      const Eigen::MatrixXcd A = hermitian();
      const bool constant = std::all_of(mode.begin(), mode.end(), [](int v) { return v == 0; });
      const Eigen::MatrixXcd B = constant ? Eigen::MatrixXcd::Zero(rank, rank) : hermitian();
      for (std::size_t node = 0; node < grid.node_count(); ++node) {
        grid.coordinates(node, x);
        double arg = 0.0;
        for (int a = 0; a < m; ++a)
          arg += 2.0 * std::numbers::pi * mode[a] * (x[a] - grid.domain().lower(a)) / grid.domain().extent(a);
        const double c = std::cos(arg), s = std::sin(arg);
        for (int i = 0; i < rank; ++i)
          for (int j = 0; j < rank; ++j) field.at(node, i, j) += c * A(i, j) + s * B(i, j);
      }
    }
    E.push_back(std::move(field));
  }
  return ConnectionOnC(std::move(E));
}

DifferentialForm ConnectionOnC::form() const {
  const int m = dimension();
  DifferentialForm a(grid(), m, 1, rank());
  for (int k = 0; k < m; ++k) {
    MatrixField iE = E_[k];
    for (auto& v : iE.data()) v *= Complex(0.0, 1.0);
    a.set_component(AxisMask{1} << k, iE);
  }
  return a;
}

double ConnectionOnC::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& e : E_) worst = std::max(worst, e.hermiticity_defect());
  return worst;
}

DifferentialForm connection_curvature(const ConnectionOnC& connection) {
  const DifferentialForm a = connection.form();
  return exterior_derivative(a) + wedge(a, a);
}

double flatness_residual(const ConnectionOnC& connection) { return connection_curvature(connection).max_abs(); }

std::vector<ScalarField> induced_metric(const SectionCycle& cycle) {
  const SemiFlatGeometry& geo = cycle.geometry();
  const int m = cycle.dimension();
  std::vector<std::vector<ScalarField>> dy(m);  // dy[j][a] = d_a y^j
  for (int j = 0; j < m; ++j)
    for (int a = 0; a < m; ++a) dy[j].push_back(partial_derivative(cycle.section(j), a, 1));
  std::vector<ScalarField> G(static_cast<std::size_t>(m * m), ScalarField(geo.grid()));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      ScalarField s = geo.hessian(a, b);
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) s += dy[j][a] * geo.hessian(j, l) * dy[l][b];
      G[a * m + b] = s;
      G[b * m + a] = s;
    }
  return G;
}

DifferentialForm covariant_derivative(const DifferentialForm& B, const ConnectionOnC* connection) {
  DifferentialForm out = exterior_derivative(B);
  if (!connection) return out;
  const DifferentialForm a = connection->form();
  out += wedge(a, B);
  DifferentialForm right = wedge(B, a);
  right *= (B.degree() % 2) ? -1.0 : 1.0;
  out -= right;
  return out;
}

std::pair<double, double> harmonic_residual(const DifferentialForm& B, const SectionCycle& cycle,
                                            const ConnectionOnC* connection) {
  const int m = cycle.dimension();
  if (B.space_dimension() != m) throw InvalidArgument("harmonic_residual: form must live on the base");
  const double closed = B.degree() < m ? covariant_derivative(B, connection).max_abs() : 0.0;
  const DifferentialForm star = hodge_star(B, induced_metric(cycle));
  const double coclosed = star.degree() < m ? covariant_derivative(star, connection).max_abs() : 0.0;
  return {closed, coclosed};
}

}  // namespace mirrorforge
