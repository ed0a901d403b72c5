#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <vector>

#include <mirrorforge/dual.hpp>
#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/functionals.hpp>
#include <mirrorforge/transform.hpp>

using namespace mirrorforge;
using std::numbers::pi;

namespace {

std::shared_ptr<const SemiFlatGeometry> geometry(const std::string& phi, const Grid& g) {
  return std::make_shared<const SemiFlatGeometry>(KahlerPotential::from_expression(parse_expression(phi), g));
}

std::shared_ptr<const DualGeometry> dual_of(const SemiFlatGeometry& geo) {
  return std::make_shared<const DualGeometry>(DualGeometry::build(geo));
}

// m! times the sign of the permutation taking (x1 y1 x2 y2 ...) to (x1 .. xm y1 .. ym),
// counted by inversions.
double brute_force_kappa(int m) {
  std::vector<int> order;
  for (int k = 0; k < m; ++k) {
    order.push_back(k);
    order.push_back(m + k);
  }
  int inversions = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) inversions += order[i] > order[j];
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return inversions % 2 ? -f : f;
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("kappa agrees with a permutation count") {
  for (int m = 1; m <= 4; ++m) CHECK(kappa_dhym(m) == brute_force_kappa(m));
  CHECK(kappa_dhym(2) == -2.0);
  CHECK(kappa_dhym(3) == -6.0);
}

TEST_CASE("a non-gradient connection has F02 of one quarter") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const auto geo = geometry("(x1^2 + x2^2)/2", g);
  const auto dual = dual_of(*geo);
  // A = i xt2 dyt1
  DifferentialForm A(dual->grid(), 4, 1);
  A.set_component(AxisMask{1} << 2, ScalarField::from_function(dual->grid(), [](std::span<const double> x) {
                    return Complex(0.0, x[1]);
                  }));
  CHECK(f02_residual(MirrorConnection(dual, A, 0.0)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f02_residual(MirrorConnection(dual, DifferentialForm(dual->grid(), 4, 1), 0.0)) == 0.0);
}

TEST_CASE("transform of a special gradient section on the flat torus") {
  const Grid g(Domain::torus(2), 16);
  const auto geo = geometry("(x1^2 + x2^2)/2", g);
  const auto dual = dual_of(*geo);
  const SectionCycle c(geo, LiftedField::from_expression(parse_expression("0.3*x1 - 0.2*x2"), g), 0.0);
  const MirrorConnection mc = fm_transform(c, ConnectionOnC::zero(g, 1), dual);
  CHECK(mc.rank() == 1);
  CHECK(std::abs(mc.section(0)[5] - 0.3) < 1e-13);
  CHECK(std::abs(mc.section(1)[5] + 0.2) < 1e-13);
  CHECK(f02_residual(mc) < 1e-13);
  CHECK(dhym_residual(mc).max_abs() < 1e-13);
  CHECK(mc.curvature().max_abs() < 1e-13);
}

TEST_CASE("dhym residual is kappa times the slag residual on a flat box") {
  for (int m = 1; m <= 3; ++m) {
    const std::vector<double> lo(m, 0.0), hi(m, 1.0);
    const Grid g(Domain::box(lo, hi), 8);
    std::string phi = "0", f = "0";
    const double a[3] = {0.4, -0.3, 0.7};
    for (int k = 1; k <= m; ++k) {
      phi += " + x" + std::to_string(k) + "^2/2";
      f += " + " + std::to_string(a[k - 1]) + "*x" + std::to_string(k) + "^2/2";
    }
    const auto geo = geometry(phi, g);
    const SectionCycle c(geo, LiftedField::from_expression(parse_expression(f), g), 0.3);
    const MirrorConnection mc = fm_transform(c, ConnectionOnC::zero(g, 1), dual_of(*geo));
    Complex prod = std::exp(Complex(0.0, -0.3));
    for (int k = 0; k < m; ++k) prod *= Complex(1.0, a[k]);
    const ScalarField d = dhym_residual(mc);
    for (std::size_t n = 0; n < d.grid().node_count(); ++n)
      CHECK(d[n].real() == doctest::Approx(brute_force_kappa(m) * prod.imag()).epsilon(1e-10));
  }
}

TEST_CASE("form transforms differ by a sign") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 8);
  const auto geo = geometry("x1^2 + x2^2/2", g);
  const auto dual = dual_of(*geo);
  const DifferentialForm dx = DifferentialForm::monomial(g, 2, {0});
  const DifferentialForm phi = transform_form(dx, FormTransform::Phi, *dual);
  const DifferentialForm psi = transform_form(dx, FormTransform::Psi, *dual);
  CHECK((phi + psi).max_abs() < 1e-15);
  // phi^{11} = 1/2, so Phi(dx1) = -1/4 dzt-bar_1
  CHECK(std::abs(phi.component(AxisMask{1} << 2)[3] + 0.25) < 1e-14);
  CHECK(phi.component(AxisMask{1} << 3).max_abs() < 1e-15);
  const DifferentialForm vol = transform_form(DifferentialForm::monomial(g, 2, {0, 1}), FormTransform::Phi, *dual);
  CHECK(std::abs(vol.component((AxisMask{1} << 2) | (AxisMask{1} << 3))[0] - 0.125) < 1e-14);
}

TEST_CASE("constant forms stay harmonic under the transform") {
  const Grid g(Domain::torus(2), 8);
  const auto geo = geometry("(x1^2 + x2^2)/2", g);
  const auto dual = dual_of(*geo);
  const SectionCycle c(geo, LiftedField::from_expression(parse_expression("0"), g), 0.0);
  const MirrorConnection mc = fm_transform(c, ConnectionOnC::zero(g, 1), dual);
  const auto [dbar, im] =
      deformed_harmonic_residual(transform_form(DifferentialForm::monomial(g, 2, {1}), FormTransform::Phi, *dual), mc);
  CHECK(dbar < 1e-14);
  CHECK(im < 1e-14);
}

TEST_CASE("connections on other grids are rejected") {
  const Grid g(Domain::torus(2), 8);
  const auto dual = dual_of(*geometry("(x1^2 + x2^2)/2", g));
  CHECK_THROWS_AS(MirrorConnection(dual, DifferentialForm(Grid(Domain::torus(2), 16), 4, 1), 0.0), InvalidArgument);
  CHECK_THROWS_AS(MirrorConnection(dual, DifferentialForm(dual->grid(), 2, 1), 0.0), InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("functionals") {

TEST_CASE("abelian chern-simons of a helical field") {
  // A = (sin 2pi x3, cos 2pi x3, 0) has A . curl A = 2 pi
  double prev = 0.0;
  for (int n : {16, 32}) {
    const Grid g(Domain::torus(3), n);
    const DifferentialForm a = DifferentialForm::one_form(
        {sample(parse_expression("sin(2*pi*x3)"), g), sample(parse_expression("cos(2*pi*x3)"), g),
         ScalarField::constant(g, 0.0)},
        3);
    const double err = std::abs(chern_simons(a) - 2 * pi);
    CHECK(err < 0.05 * 2 * pi);
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("abelian chern-simons is gauge invariant") {
  const Grid g(Domain::torus(3), 12);
  const ConnectionOnC a = ConnectionOnC::random(g, 1, 3);
  const DifferentialForm chi = exterior_derivative(
      DifferentialForm::function(sample(parse_expression("sin(2*pi*x1)*cos(2*pi*(x2 + x3))"), g), 3));
  DifferentialForm shifted = a.form();
  shifted += chi;
  CHECK(std::abs(chern_simons(shifted) - chern_simons(a)) < 1e-10 * std::max(1.0, std::abs(chern_simons(a))));
}

TEST_CASE("holomorphic chern-simons matches on the flat torus") {
  const Grid g(Domain::torus(3), 8);
  const auto geo = geometry("(x1^2 + x2^2 + x3^2)/2", g);
  const SectionCycle c(geo, LiftedField::from_expression(parse_expression("0"), g), 0.0);
  const CSReport r = cs_equality_report(c, ConnectionOnC::random(g, 1, 11), dual_of(*geo));
  CHECK(std::abs(r.cs_value) > 1e-3);
  CHECK(std::abs(r.cs_hol_value - kKappaCS * r.cs_value) < 1e-12 * std::abs(r.cs_value));
  CHECK(r.relative_mismatch < 1e-12);
}

TEST_CASE("a-side moduli form of coordinate tuples") {
  const Grid g(Domain::torus(3), 4);
  const DifferentialForm dx1 = DifferentialForm::monomial(g, 3, {0}), dx2 = DifferentialForm::monomial(g, 3, {1}),
                         dx3 = DifferentialForm::monomial(g, 3, {2});
  CHECK(std::abs(a_moduli_m_form({dx1, dx2, dx3}) - 1.0) < 1e-14);
  DifferentialForm tau = dx2;
  tau *= Complex(0.0, 1.0);
  tau += dx1;
  CHECK(std::abs(a_moduli_m_form({tau, dx2, dx3}) - 1.0) < 1e-14);
  CHECK(std::abs(a_moduli_m_form({dx2, dx1, dx3}) + 1.0) < 1e-14);
  CHECK(std::abs(a_moduli_m_form({dx1, dx1, dx3})) < 1e-14);
}

TEST_CASE("b-side moduli form of transformed tuples") {
  const Grid g(Domain::torus(3), 4);
  const auto dual = dual_of(*geometry("(x1^2 + x2^2 + x3^2)/2", g));
  const DifferentialForm zero(g, 3, 1);
  std::vector<DifferentialForm> b;
  for (int k = 0; k < 3; ++k) b.push_back(moduli_tangent_transform(DifferentialForm::monomial(g, 3, {k}), zero, *dual));
  CHECK(std::abs(b_moduli_m_form(b, *dual) - kKappaModuli) < 1e-13);
  std::swap(b[0], b[2]);
  CHECK(std::abs(b_moduli_m_form(b, *dual) + kKappaModuli) < 1e-13);
}

}  // TEST_SUITE
