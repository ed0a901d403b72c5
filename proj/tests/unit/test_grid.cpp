#include <doctest.h>

#include <cmath>
#include <numbers>

#include <mirrorforge/derivative.hpp>
#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/interpolation.hpp>
#include <mirrorforge/quadrature.hpp>
#include <mirrorforge/random.hpp>
#include <mirrorforge/spectral.hpp>

using namespace mirrorforge;
using std::numbers::pi;

TEST_SUITE("grid") {

TEST_CASE("torus and box node counts") {
  const Grid t(Domain::torus(2), 8);
  CHECK(t.node_count() == 64);
  CHECK(t.spacing(0) == doctest::Approx(0.125));
  const Grid b(Domain::box({0.0, -1.0}, {1.0, 1.0}), 4);
  CHECK(b.count(0) == 5);
  CHECK(b.node_count() == 25);
  CHECK(b.spacing(1) == doctest::Approx(0.5));
  CHECK(b.max_spacing() == doctest::Approx(0.5));
}

TEST_CASE("periodic shift wraps, box shift throws at a face") {
  const Grid t(Domain::torus(1), 4);
  CHECK(t.shift(0, 0, -1) == 3);
  const Grid b(Domain::box({0.0}, {1.0}), 4);
  CHECK_THROWS(b.shift(0, 0, -1));
  CHECK(b.on_boundary(0));
  CHECK_FALSE(b.on_boundary(2));
  CHECK(b.boundary_depth(2) == 2);
}

TEST_CASE("axis 0 varies fastest") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 4);
  CHECK(g.index(1, 0) == 1);
  CHECK(g.index(1, 1) == 0);
  CHECK(g.index(5, 1) == 1);
  const int idx[2] = {2, 1};
  CHECK(g.node(idx) == 7);
}

TEST_CASE("bad domains are rejected") {
  CHECK_THROWS_AS(Domain::box({0.0}, {0.0}), InvalidArgument);
  CHECK_THROWS_AS(Grid(Domain::torus(2), 0), InvalidArgument);
  CHECK_THROWS_AS(Domain::torus(5), InvalidArgument);
}

}  // TEST_SUITE

TEST_SUITE("expression") {

TEST_CASE("precedence and functions") {
  CHECK(parse_expression("1 + 2*3^2").evaluate(std::map<std::string, double>{}) == doctest::Approx(19.0));
  CHECK(parse_expression("-2^2").evaluate(std::map<std::string, double>{}) == doctest::Approx(-4.0));
  CHECK(parse_expression("2^3^2").evaluate(std::map<std::string, double>{}) == doctest::Approx(512.0));
  const auto e = parse_expression("sin(pi*x1) + sqrt(y2) * exp(xt1) - atan(yt1)");
  const double v = e.evaluate({{"x1", 0.25}, {"y2", 4.0}, {"xt1", 0.0}, {"yt1", 1.0}});
  CHECK(v == doctest::Approx(std::sin(pi / 4) + 2.0 - pi / 4));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_expression("x1 + * 2");
    FAIL("no throw");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_THROWS_AS(parse_expression("foo(x1)"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("(x1"), SyntaxError);
  CHECK_THROWS_AS(parse_expression(""), SyntaxError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(parse_expression("log(x1)").evaluate({{"x1", -1.0}}), DomainError);
  CHECK_THROWS_AS(parse_expression("1/x1").evaluate({{"x1", 0.0}}), DomainError);
  CHECK_THROWS_AS(parse_expression("x1 + x2").evaluate({{"x1", 0.0}}), InvalidArgument);
}

TEST_CASE("sampling binds axes in order") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 2.0}), 4);
  const ScalarField f = sample(parse_expression("x1 + 10*x2"), g);
  for (std::size_t n = 0; n < g.node_count(); ++n)
    CHECK(f[n].real() == doctest::Approx(g.coordinate(n, 0) + 10 * g.coordinate(n, 1)));
  const ScalarField h = sample(parse_expression("y1"), g, {"x1", "y1"});
  CHECK(h[g.node_count() - 1].real() == doctest::Approx(2.0));
}

}  // TEST_SUITE

TEST_SUITE("derivative") {

TEST_CASE("quadratics are differentiated exactly on a box, faces included") {
  const Grid g(Domain::box({-0.5, 0.25}, {0.75, 1.5}), 6);
  const ScalarField f = sample(parse_expression("x1^2 - 3*x1*x2 + 0.5*x2^2 + x2"), g);
  const ScalarField fx = partial_derivative(f, 0, 1);
  const ScalarField fyy = partial_derivative(f, 1, 2);
  const ScalarField fxy = hessian_entry(f, 0, 1);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const double x = g.coordinate(n, 0), y = g.coordinate(n, 1);
    CHECK(fx[n].real() == doctest::Approx(2 * x - 3 * y).epsilon(1e-12));
    CHECK(fyy[n].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fxy[n].real() == doctest::Approx(-3.0).epsilon(1e-12));
  }
}

TEST_CASE("periodic derivatives are second order") {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Grid g(Domain::torus(1), n);
    const ScalarField f = sample(parse_expression("sin(2*pi*x1)"), g);
    const ScalarField d2 = partial_derivative(f, 0, 2);
    double err = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k)
      err = std::max(err, std::abs(d2[k].real() + 4 * pi * pi * std::sin(2 * pi * g.coordinate(k, 0))));
    if (prev > 0.0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("mixed stencil is symmetric in its axes") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 5);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const Stencil a = hessian_stencil(g, n, 0, 1), b = hessian_stencil(g, n, 1, 0);
    REQUIRE(a.size() == b.size());
    for (int k = 0; k < a.size(); ++k) {
      CHECK(a.begin()[k].node == b.begin()[k].node);
      CHECK(a.begin()[k].weight == b.begin()[k].weight);
    }
  }
}

TEST_CASE("spectral derivative is exact for trigonometric data") {
  const Grid g(Domain::torus(2), 12);
  const ScalarField f = sample(parse_expression("cos(2*pi*x1)*sin(4*pi*x2)"), g);
  const ScalarField d = spectral_derivative(f, 1, 1);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    const double x = g.coordinate(n, 0), y = g.coordinate(n, 1);
    CHECK(std::abs(d[n] - 4 * pi * std::cos(2 * pi * x) * std::cos(4 * pi * y)) < 1e-11);
  }
}

}  // TEST_SUITE

TEST_SUITE("quadrature") {

TEST_CASE("rectangle rule integrates trigonometric polynomials exactly") {
  const Grid g(Domain::torus(2), 8);
  CHECK(std::abs(integrate(sample(parse_expression("1 + cos(2*pi*x1)*cos(2*pi*x2)"), g)) - 1.0) < 1e-14);
  CHECK(std::abs(integrate(sample(parse_expression("sin(2*pi*x1)^2"), g)) - 0.5) < 1e-14);
}

TEST_CASE("trapezoid rule on a box") {
  const Grid g(Domain::box({0.0, 0.0}, {2.0, 1.0}), 8);
  CHECK(std::abs(integrate(sample(parse_expression("x1 + x2"), g)) - 3.0) < 1e-13);
  double w = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n) w += quadrature_weight(g, n);
  CHECK(w == doctest::Approx(2.0));
}

}  // TEST_SUITE

TEST_SUITE("random") {

// Reference recurrence written out independently of the library.
std::uint64_t reference_stream(std::uint64_t seed, int count) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  std::uint64_t s = z ^ (z >> 31);
  std::uint64_t out = 0;
  for (int i = 0; i < count; ++i) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    out = s * 0x2545F4914F6CDD1Dull;
  }
  return out;
}

TEST_CASE("xorshift64* matches the documented recurrence") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull}) {
    Xorshift64Star rng(seed);
    for (int i = 1; i <= 5; ++i) CHECK(rng.next() == reference_stream(seed, i));
  }
}

TEST_CASE("uniform draws stay in range and are reproducible") {
  Xorshift64Star a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform(-1.0, 2.0);
    CHECK(u >= -1.0);
    CHECK(u < 2.0);
    CHECK(u == b.uniform(-1.0, 2.0));
  }
}

}  // TEST_SUITE

TEST_SUITE("interpolation") {

TEST_CASE("cubic reproduces cubics and returns node samples") {
  const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), 6);
  const ScalarField f = sample(parse_expression("x1^3 - 2*x1*x2^2 + x2"), g);
  const Interpolant it(f, InterpolationMethod::Cubic);
  const double p[2] = {0.37, 0.91};
  CHECK(std::abs(it.value(p) - (std::pow(0.37, 3) - 2 * 0.37 * 0.91 * 0.91 + 0.91)) < 1e-13);
  const double q[2] = {g.coordinate(8, 0), g.coordinate(8, 1)};
  CHECK(it.value(q) == f[8]);
}

TEST_CASE("spectral interpolation of a band-limited field") {
  const Grid g(Domain::torus(2), 8);
  const ScalarField f = sample(parse_expression("cos(2*pi*x1) + sin(2*pi*(x1 + 2*x2))"), g);
  const Interpolant it(f, InterpolationMethod::Spectral);
  const double p[2] = {0.123, 0.777};
  Complex grad[2];
  const Complex v = it.value_and_gradient(p, grad);
  CHECK(std::abs(v - (std::cos(2 * pi * 0.123) + std::sin(2 * pi * (0.123 + 2 * 0.777)))) < 1e-12);
  CHECK(std::abs(grad[1] - 4 * pi * std::cos(2 * pi * (0.123 + 2 * 0.777))) < 1e-11);
  CHECK_THROWS_AS(Interpolant(sample(parse_expression("x1"), Grid(Domain::box({0.0}, {1.0}), 4)),
                              InterpolationMethod::Spectral),
                  InvalidArgument);
}

}  // TEST_SUITE
