#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include <mirrorforge/acycle.hpp>
#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>

using namespace mirrorforge;
using std::numbers::pi;

namespace {

std::shared_ptr<const SemiFlatGeometry> geometry(const std::string& phi, const Grid& g) {
  return std::make_shared<const SemiFlatGeometry>(KahlerPotential::from_expression(parse_expression(phi), g));
}

LiftedField lifted(const std::string& f, const Grid& g) {
  return LiftedField::from_expression(parse_expression(f), g);
}

}  // namespace

TEST_SUITE("acycle") {

TEST_CASE("one dimensional special section: f'' = tan(theta)") {
  const Grid g(Domain::box({0.0}, {1.0}), 8);
  const double theta = 0.7;
  const SectionCycle c(geometry("x1^2/2", g), lifted(std::to_string(std::tan(theta)) + "*x1^2/2", g), theta);
  CHECK(slag_residual(c).max_abs() < 1e-6);
  const SectionCycle exact(geometry("x1^2/2", g),
                           LiftedField::sampled(ScalarField::from_function(g, [&](std::span<const double> x) {
                             return Complex(std::tan(theta) * x[0] * x[0] / 2);
                           })),
                           theta);
  CHECK(slag_residual(exact).max_abs() < 1e-13);
}

TEST_CASE("angles of the hessian add up to the phase") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const double a = 0.3, b = -0.1;
  const double theta = std::atan(a) + std::atan(b);
  const auto f = ScalarField::from_function(g, [&](std::span<const double> x) {
    return Complex(0.5 * (a * x[0] * x[0] + b * x[1] * x[1]));
  });
  const SectionCycle c(geometry("(x1^2 + x2^2)/2", g), LiftedField::sampled(f), theta);
  CHECK(slag_residual(c).max_abs() < 1e-13);
  const SectionCycle off(geometry("(x1^2 + x2^2)/2", g), LiftedField::sampled(f), theta + 0.1);
  CHECK(slag_residual(off).max_abs() > 1e-3);
}

TEST_CASE("gradient sections are Lagrangian") {
  const Grid g(Domain::torus(2), 16);
  const SectionCycle c(geometry("(x1^2 + x2^2)/2 + 0.01*cos(2*pi*x1)*sin(2*pi*x2)", g),
                       lifted("0.05*sin(2*pi*x1) + 0.03*cos(2*pi*(x1 - x2))", g), 0.0);
  // symmetric mixed stencils keep this at roundoff, not truncation error
  CHECK(lagrangian_residual(c) < 1e-12);
}

TEST_CASE("section on a flat base is the gradient") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const SectionCycle c(geometry("x1^2 + x2^2/2", g), lifted("x1*x2", g), 0.0);
  // y^j = phi^{jk} d_k f with phi = diag(2, 1)
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    CHECK(c.section(0)[n].real() == doctest::Approx(g.coordinate(n, 1) / 2));
    CHECK(c.section(1)[n].real() == doctest::Approx(g.coordinate(n, 0)));
  }
  CHECK(lagrangian_residual(c) < 1e-13);
}

TEST_CASE("covariant hessian is the plain hessian on flat geometry") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const auto geo = geometry("(x1^2 + x2^2)/2", g);
  const auto H = covariant_hessian(lifted("x1^2 - 3*x1*x2", g), *geo);
  CHECK(H[0][4].real() == doctest::Approx(2.0));
  CHECK(H[1][4].real() == doctest::Approx(-3.0));
  CHECK(H[3][4].real() == doctest::Approx(0.0));
}

TEST_CASE("newton finds a special section on a curved box") {
  const Grid g(Domain::box({0.6, 0.4}, {1.6, 1.4}), 16);
  const auto geo = geometry("0.5*(x1^2 + x2^2) + 0.1*x1^3/3", g);
  const SlagResult r = solve_slag_section(geo, pi / 6, lifted("tan(pi/12)*(x1^2 + x2^2)/2 + 0.05*x1*x2", g), 1e-11);
  CHECK(r.diagnostics.converged);
  double worst = 0.0;
  const ScalarField s = slag_residual(r.cycle);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (!g.on_boundary(n)) worst = std::max(worst, std::abs(s[n]));
  CHECK(worst < 1e-10);
}

TEST_CASE("periodic sections report the unattainable phase as a defect") {
  const Grid g(Domain::torus(2), 16);
  const auto geo = geometry("(x1^2 + x2^2)/2", g);
  const SlagResult r = solve_slag_section(geo, 0.4, lifted("0.01*sin(2*pi*x1)", g), 1e-11);
  CHECK(std::abs(r.phase_defect) > 0.1);
  CHECK(r.cycle.potential().remainder().max_abs() < 1e-9);
  const SlagResult zero = solve_slag_section(geo, 0.0, lifted("0.01*sin(2*pi*x1)", g), 1e-11);
  CHECK(std::abs(zero.phase_defect) < 1e-10);
}

}  // TEST_SUITE

TEST_SUITE("connection") {

TEST_CASE("gauge potentials give flat connections") {
  const Grid g(Domain::torus(3), 12);
  const ConnectionOnC a = ConnectionOnC::from_potential(lifted("sin(2*pi*x1)*cos(2*pi*x3) + 0.3*x2", g));
  CHECK(flatness_residual(a) < 1e-10);
  CHECK(a.hermiticity_defect() == 0.0);
}

TEST_CASE("random connections are hermitian, seeded and curved") {
  const Grid g(Domain::torus(3), 8);
  const ConnectionOnC a = ConnectionOnC::random(g, 2, 7), b = ConnectionOnC::random(g, 2, 7),
                      c = ConnectionOnC::random(g, 2, 8);
  CHECK(a.hermiticity_defect() < 1e-15);
  CHECK((a.form() - b.form()).max_abs() == 0.0);
  CHECK((a.form() - c.form()).max_abs() > 1e-3);
  CHECK(flatness_residual(a) > 1e-2);
}

TEST_CASE("non-abelian curvature includes the commutator") {
  const Grid g(Domain::torus(2), 4);
  MatrixField E1(g, 2), E2(g, 2);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    E1.at(n, 0, 1) = E1.at(n, 1, 0) = 1.0;
    E2.at(n, 0, 0) = 1.0;
    E2.at(n, 1, 1) = -1.0;
  }
  const DifferentialForm F = connection_curvature(ConnectionOnC({E1, E2}));
  // a ^ a = (i)^2 [E1, E2] dx1 dx2 ; [sx, sz] = -2i sy
  const MatrixField c = F.matrix_component(axes_mask(std::vector<int>{0, 1}));
  CHECK(std::abs(c.at(0, 0, 1) - Complex(2.0, 0.0)) < 1e-14);
  CHECK(std::abs(c.at(0, 1, 0) - Complex(-2.0, 0.0)) < 1e-14);
}

TEST_CASE("constant forms are harmonic on the flat zero section") {
  const Grid g(Domain::torus(3), 8);
  const SectionCycle c(geometry("(x1^2 + x2^2 + x3^2)/2", g), lifted("0", g), 0.0);
  const auto [d, dstar] = harmonic_residual(DifferentialForm::monomial(g, 3, {0, 2}), c);
  CHECK(d < 1e-14);
  CHECK(dstar < 1e-14);
  const DifferentialForm x = exterior_derivative(DifferentialForm::function(sample(parse_expression("sin(2*pi*x1)"), g), 3));
  CHECK(harmonic_residual(x, c).second > 1.0);
}

TEST_CASE("induced metric of a graph") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const SectionCycle c(geometry("(x1^2 + x2^2)/2", g), lifted("0.5*x1^2 + x1*x2", g), 0.0);
  // dy = Hess f = [[1, 1], [1, 0]], G = I + dy^T dy = [[3, 1], [1, 2]]
  const auto G = induced_metric(c);
  CHECK(G[0][7].real() == doctest::Approx(3.0));
  CHECK(G[1][7].real() == doctest::Approx(1.0));
  CHECK(G[3][7].real() == doctest::Approx(2.0));
}

TEST_CASE("mismatched grids are rejected") {
  const Grid g(Domain::torus(2), 8), h(Domain::torus(2), 16);
  CHECK_THROWS_AS(SectionCycle(geometry("(x1^2 + x2^2)/2", g), lifted("0", h), 0.0), InvalidArgument);
}

}  // TEST_SUITE
