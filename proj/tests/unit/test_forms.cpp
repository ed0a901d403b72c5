#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/forms.hpp>
#include <mirrorforge/random.hpp>

using namespace mirrorforge;
using std::numbers::pi;

namespace {

ScalarField random_trig(const Grid& g, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), c = rng.uniform(-1, 1);
  return ScalarField::from_function(g, [&](std::span<const double> x) {
    double s = a * std::sin(2 * pi * x[0]);
    if (x.size() > 1) s += b * std::cos(2 * pi * (x[0] + x[1]));
    if (x.size() > 2) s += c * std::sin(2 * pi * (x[1] - 2 * x[2]));
    return Complex(s, 0.5 * s * s);
  });
}

DifferentialForm random_one_form(const Grid& g, int dim, std::uint64_t seed) {
  std::vector<ScalarField> c;
  for (int a = 0; a < dim; ++a) c.push_back(random_trig(g, seed + 17 * a));
  return DifferentialForm::one_form(c, dim);
}

}  // namespace

TEST_SUITE("forms") {

TEST_CASE("d of d vanishes to roundoff") {
  const Grid g(Domain::torus(3), 8);
  const DifferentialForm f = DifferentialForm::function(random_trig(g, 1), 3);
  CHECK(exterior_derivative(exterior_derivative(f)).max_abs() < 1e-10);
  const DifferentialForm a = random_one_form(g, 3, 5);
  CHECK(exterior_derivative(exterior_derivative(a)).max_abs() < 1e-9);
}

TEST_CASE("d of d vanishes with invariant axes") {
  const Grid g(Domain::torus(2), 8);
  const DifferentialForm a = random_one_form(g, 4, 3);
  CHECK(exterior_derivative(exterior_derivative(a)).max_abs() < 1e-9);
}

TEST_CASE("wedge is graded commutative") {
  const Grid g(Domain::torus(3), 4);
  const DifferentialForm a = random_one_form(g, 3, 11), b = random_one_form(g, 3, 23);
  CHECK((wedge(a, b) + wedge(b, a)).max_abs() < 1e-14);
  CHECK(wedge(a, a).max_abs() < 1e-14);
  const DifferentialForm ab = wedge(a, b);
  CHECK((wedge(ab, a) - wedge(a, ab)).max_abs() < 1e-13);
}

TEST_CASE("top coefficient follows the axis order") {
  const Grid g(Domain::torus(2), 4);
  const DifferentialForm v = DifferentialForm::monomial(g, 2, {1, 0}, 3.0);
  CHECK(top_coefficient(v)[0] == Complex(-3.0));
  CHECK(std::abs(integrate_top(DifferentialForm::monomial(g, 2, {0, 1}, 2.0)) - 2.0) < 1e-15);
}

TEST_CASE("exterior derivative on a box is exact for low-degree polynomials") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 2.0}), 5);
  DifferentialForm a = DifferentialForm::monomial(g, 2, {1});
  a = scale(a, sample(parse_expression("x1^2 + x1*x2"), g));
  const DifferentialForm da = exterior_derivative(a);
  const ScalarField c = top_coefficient(da);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    CHECK(c[n].real() == doctest::Approx(2 * g.coordinate(n, 0) + g.coordinate(n, 1)).epsilon(1e-12));
}

TEST_CASE("holomorphic frame conversion") {
  const Grid g(Domain::torus(1), 4);
  const ComplexStructure J = ComplexStructure::standard(1);
  const DifferentialForm dx = DifferentialForm::monomial(g, 2, {0});
  const DifferentialForm h = dx.to_frame(Frame::Holomorphic, J);
  // dx = (dz + dz-bar) / 2
  CHECK(std::abs(h.component(axes_mask(std::vector<int>{0}))[0] - 0.5) < 1e-15);
  CHECK(std::abs(h.component(axes_mask(std::vector<int>{1}))[0] - 0.5) < 1e-15);
  CHECK((h.to_frame(Frame::Real) - dx).max_abs() < 1e-15);
  // dz ^ dz-bar = -2i dx ^ dy
  const DifferentialForm dzdzb = DifferentialForm::monomial(g, 2, {0, 1}, 1.0, Frame::Holomorphic, J);
  CHECK(std::abs(top_coefficient(dzdzb)[0] - Complex(0, -2)) < 1e-15);
}

TEST_CASE("type decomposition sums to the form") {
  const Grid g(Domain::torus(2), 4);
  const ComplexStructure J = ComplexStructure::standard(2);
  const DifferentialForm a = random_one_form(g, 4, 2), b = random_one_form(g, 4, 9);
  const DifferentialForm w = wedge(a, b);
  const auto parts = decompose_pq(w, J);
  DifferentialForm sum(g, 4, 2);
  for (const auto& [pq, part] : parts) {
    CHECK(pq.first + pq.second == 2);
    sum += part.to_frame(Frame::Real);
  }
  CHECK((sum - w).max_abs() < 1e-13);
  // dz_1 ^ dz-bar_2 is pure (1,1)
  const DifferentialForm m = DifferentialForm::monomial(g, 4, {0, 3}, 1.0, Frame::Holomorphic, J);
  CHECK(type_component(m, J, 1, 1).max_abs() == doctest::Approx(1.0));
  CHECK(type_component(m, J, 0, 2).max_abs() < 1e-15);
}

TEST_CASE("conjugation swaps dz and dz-bar") {
  const Grid g(Domain::torus(1), 4);
  const ComplexStructure J = ComplexStructure::standard(1);
  const DifferentialForm dz = DifferentialForm::monomial(g, 2, {0}, Complex(0, 2), Frame::Holomorphic, J);
  const DifferentialForm c = dz.conj();
  CHECK(std::abs(c.component(axes_mask(std::vector<int>{1}))[0] - Complex(0, -2)) < 1e-15);
}

TEST_CASE("symmetrized wedge of matrix one-forms") {
  const Grid g(Domain::torus(2), 4);
  MatrixField sx(g, 2), sy(g, 2);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    sx.at(n, 0, 1) = sx.at(n, 1, 0) = 1.0;
    sy.at(n, 0, 1) = Complex(0, -1);
    sy.at(n, 1, 0) = Complex(0, 1);
  }
  DifferentialForm a(g, 2, 1, 2), b(g, 2, 1, 2);
  a.set_component(axes_mask(std::vector<int>{0}), sx);
  b.set_component(axes_mask(std::vector<int>{1}), sy);
  // Pauli matrices anticommute: the symmetrized product vanishes, the ordered one is i sigma_z.
  CHECK(wedge_symmetrized({a, b}).max_abs() < 1e-15);
  const MatrixField ab = wedge(a, b).matrix_component(axes_mask(std::vector<int>{0, 1}));
  CHECK(std::abs(ab.at(0, 0, 0) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(ab.at(0, 1, 1) - Complex(0, -1)) < 1e-15);
}

TEST_CASE("hodge star squares to the graded sign") {
  const Grid g(Domain::torus(3), 4);
  std::vector<ScalarField> G;
  const double M[9] = {2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0};
  for (double v : M) G.push_back(ScalarField::constant(g, v));
  const DifferentialForm a = random_one_form(g, 3, 4);
  CHECK((hodge_star(hodge_star(a, G), G) - a).max_abs() < 1e-13);
  const DifferentialForm two = hodge_star(a, G);
  CHECK(two.degree() == 2);
  // a ^ *a = |a|^2 vol with vol = sqrt(det G) dx1 dx2 dx3
  const DifferentialForm f = DifferentialForm::monomial(g, 3, {0});
  const double det = 2.0 * (1.5 - 0.04) - 0.3 * (0.3 + 0.02) + 0.1 * (-0.06 - 0.15);
  const Eigen::Matrix3d inv = Eigen::Map<const Eigen::Matrix3d>(M).inverse();
  CHECK(top_coefficient(wedge(f, hodge_star(f, G)))[0].real() == doctest::Approx(inv(0, 0) * std::sqrt(det)));
}

TEST_CASE("fiber integration keeps the invariant directions") {
  const Grid g(Domain::torus(1), 4);
  const DifferentialForm a = DifferentialForm::monomial(g, 2, {0, 1}, 5.0);
  const DifferentialForm r = fiber_integrate(a);
  CHECK(r.degree() == 1);
  CHECK(r.space_dimension() == 1);
  CHECK(std::abs(r.component(axes_mask(std::vector<int>{0}))[0] - 5.0) < 1e-15);
  CHECK(fiber_integrate(DifferentialForm::monomial(g, 2, {0})).max_abs() == 0.0);
}

TEST_CASE("mismatched inputs throw") {
  const Grid g(Domain::torus(2), 4), h(Domain::torus(2), 8);
  CHECK_THROWS_AS(DifferentialForm::monomial(g, 2, {0}) + DifferentialForm::monomial(h, 2, {0}), InvalidArgument);
  CHECK_THROWS_AS(DifferentialForm::monomial(g, 1, {0}), InvalidArgument);
}

}  // TEST_SUITE
