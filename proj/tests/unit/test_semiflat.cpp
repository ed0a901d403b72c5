#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include <mirrorforge/dual.hpp>
#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/semiflat.hpp>

using namespace mirrorforge;
using std::numbers::pi;

namespace {

const char* kPerturbed = "(x1^2 + x2^2)/2 + 0.05*(sin(2*pi*x1)*sin(2*pi*x2) + 0.5*cos(2*pi*x1))/(4*pi^2)";
const char* kRadial = "0.5*(sqrt(x1^2+x2^2)*sqrt(x1^2+x2^2+1) + log(sqrt(x1^2+x2^2) + sqrt(x1^2+x2^2+1)))";

KahlerPotential potential(const std::string& text, const Grid& g, double c = 1.0) {
  return KahlerPotential::from_expression(parse_expression(text), g, c);
}

}  // namespace

TEST_SUITE("semiflat") {

TEST_CASE("flat potential has zero residual") {
  const Grid g(Domain::torus(2), 8);
  CHECK(ma_residual(potential("(x1^2 + x2^2)/2", g)).max_abs() < 1e-13);
  CHECK(ma_residual(potential("x1^2 + x2^2/2", g, 2.0)).max_abs() < 1e-13);
}

TEST_CASE("torus lift separates quadratic and periodic parts") {
  const Grid g(Domain::torus(2), 8);
  const KahlerPotential p = potential("(x1^2 + x2^2)/2 + 0.3*x1 + 0.1*sin(2*pi*x2)", g);
  CHECK(p.phi.lift().hessian(0, 0) == doctest::Approx(1.0));
  CHECK(p.phi.lift().hessian(0, 1) == doctest::Approx(0.0));
  CHECK(p.phi.remainder().is_real(1e-14));
  CHECK_THROWS_AS(potential("x1^3", g), InvalidArgument);
}

TEST_CASE("periodic solve returns the flat potential with c = det Q") {
  const Grid g(Domain::torus(2), 16);
  const KahlerPotential init =
      potential(kPerturbed, g, 3.0);
  const MongeAmpereResult r = solve_monge_ampere(init, 3.0, 1e-11);
  CHECK(r.diagnostics.converged);
  CHECK(r.compatible_c == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ma_residual(r.potential).max_abs() < 1e-10);
  double spread = 0.0;
  const ScalarField& rem = r.potential.phi.remainder();
  for (std::size_t n = 0; n < g.node_count(); ++n) spread = std::max(spread, std::abs(rem[n] - rem[0]));
  CHECK(spread < 1e-10);
}

TEST_CASE("discrete operator truncation error is second order") {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Grid g(Domain::torus(2), n);
    const double e = ma_truncation_error(potential(kPerturbed, g).phi);
    if (prev > 0.0) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("box solve converges to the radial solution at second order") {
  const std::string exact = kRadial;
  const std::string init = exact + " + 0.02*sin(pi*(x1-0.6))*sin(pi*(x2-0.4))";
  double prev = 0.0;
  for (int n : {16, 32}) {
    const Grid g(Domain::box({0.6, 0.4}, {1.6, 1.4}), n);
    const MongeAmpereResult r = solve_monge_ampere(potential(init, g), 1.0, 1e-11);
    const ScalarField err = r.potential.phi.values() - sample(parse_expression(exact), g);
    const double e = err.max_abs();
    if (prev > 0.0) CHECK(std::log2(prev / e) == doctest::Approx(2.0).epsilon(0.1));
    prev = e;
  }
}

TEST_CASE("non-convex potentials are rejected") {
  const Grid g(Domain::box({-1.0, -1.0}, {1.0, 1.0}), 8);
  CHECK_THROWS_AS(SemiFlatGeometry(potential("x1^2 - x2^2", g)), ConvexityError);
}

TEST_CASE("geometry data for a quadratic potential") {
  const Grid g(Domain::torus(2), 8);
  const SemiFlatGeometry geo(potential("x1^2 + 0.5*x1*x2 + x2^2", g));
  CHECK(geo.hessian(0, 1)[3].real() == doctest::Approx(0.5));
  CHECK(geo.inverse_defect() < 1e-14);
  CHECK(geo.det_hessian()[0].real() == doctest::Approx(4.0 - 0.25));
  CHECK(exterior_derivative(geo.kahler_form()).max_abs() < 1e-12);
  CHECK(geo.christoffel(0, 0, 1).max_abs() < 1e-12);
}

TEST_CASE("christoffel symbols match twice the Levi-Civita connection of the hessian metric") {
  // phi = x1^4/12 + x1 x2^2 / 2 + x2^2 ; phi_11 = x1^2, phi_12 = x2, phi_22 = x1 + 2.
  const Grid g(Domain::box({0.8, 0.2}, {1.4, 0.6}), 32);
  const SemiFlatGeometry geo(potential("x1^4/12 + x1*x2^2/2 + x2^2", g));
  double worst = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    if (g.boundary_depth(n) < 2) continue;
    const double x = g.coordinate(n, 0), y = g.coordinate(n, 1);
    Eigen::Matrix2d G;
    G << x * x, y, y, x + 2;
    // dG[k](p, l) = d_k g_pl
    Eigen::Matrix2d dG[2];
    dG[0] << 2 * x, 0, 0, 1;
    dG[1] << 0, 1, 1, 0;
    const Eigen::Matrix2d inv = G.inverse();
    for (int q = 0; q < 2; ++q)
      for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 2; ++k) {
          double lc = 0.0;
          for (int p = 0; p < 2; ++p) lc += 0.5 * inv(q, p) * (dG[l](p, k) + dG[k](p, l) - dG[p](l, k));
          worst = std::max(worst, std::abs(geo.christoffel(q, l, k)[n].real() - 2 * lc));
        }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("calabi identity holds on a solved geometry") {
  const Grid g(Domain::box({0.6, 0.4}, {1.6, 1.4}), 16);
  const MongeAmpereResult r =
      solve_monge_ampere(potential(std::string(kRadial) + " + 0.02*sin(pi*(x1-0.6))*sin(pi*(x2-0.4))", g), 1.0, 1e-12);
  const SemiFlatGeometry geo(r.potential);
  CHECK(calabi_identity_residual(geo) < 1e-10);
}

}  // TEST_SUITE

TEST_SUITE("dual") {

TEST_CASE("flat torus is self dual") {
  const Grid g(Domain::torus(2), 8);
  const SemiFlatGeometry geo(potential("(x1^2 + x2^2)/2", g));
  const DualGeometry d = DualGeometry::build(geo);
  CHECK(d.round_trip_error() < 1e-14);
  CHECK(d.grid().domain().extent(0) == doctest::Approx(1.0));
  for (std::size_t n = 0; n < g.node_count(); ++n)
    CHECK(std::abs(d.preimage(0)[n] - d.grid().coordinate(n, 0)) < 1e-14);
}

TEST_CASE("legendre dual of a diagonal quadratic has the inverse hessian") {
  const Grid g(Domain::torus(2), 8);
  const SemiFlatGeometry geo(potential("2*x1^2 + 0.25*x2^2", g));
  const DualGeometry d = DualGeometry::build(geo);
  CHECK(d.grid().domain().extent(0) == doctest::Approx(4.0));
  const KahlerPotential dual = d.dual_potential();
  CHECK(dual.phi.hessian(0, 0)[0].real() == doctest::Approx(0.25));
  CHECK(dual.phi.hessian(1, 1)[5].real() == doctest::Approx(2.0));
  CHECK(dual.c == doctest::Approx(1.0));
}

TEST_CASE("periodic duals need a diagonal quadratic part") {
  const Grid g(Domain::torus(2), 8);
  const SemiFlatGeometry geo(potential("x1^2 + 0.5*x1*x2 + x2^2", g));
  CHECK_THROWS_AS(DualGeometry::build(geo), InvalidArgument);
}

TEST_CASE("dual of the dual on a curved torus") {
  const Grid g(Domain::torus(2), 32);
  const SemiFlatGeometry geo(potential("(x1^2 + x2^2)/2 + 0.005*cos(2*pi*x1)*cos(2*pi*x2) + 0.004*sin(2*pi*x2)", g));
  const InvolutionReport r = dual_of_dual(geo);
  CHECK(r.round_trip < 1e-10);
  CHECK(r.hessian_error < 1e-7);
}

TEST_CASE("composed hessian and inverse agree up to interpolation error") {
  const Grid g(Domain::box({0.6, 0.4}, {1.6, 1.4}), 16);
  const SemiFlatGeometry geo(potential(kRadial, g));
  const DualGeometry d = DualGeometry::build(geo);
  CHECK(d.round_trip_error() < 1e-10);
  const Grid& dg = d.grid();
  CHECK(dg.domain().lower(0) > 0.0);
  double worst = 0.0;
  for (std::size_t n = 0; n < dg.node_count(); ++n) {
    if (dg.boundary_depth(n) < 2) continue;
    Eigen::Matrix2d H, I;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        H(i, j) = d.hessian(i, j)[n].real();
        I(i, j) = d.inverse_hessian(i, j)[n].real();
      }
    worst = std::max(worst, (H * I - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-4);
}

}  // TEST_SUITE
