#include <algorithm>
#include <cctype>
#include <cmath>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/special_cases.hpp"

namespace mirrorforge {

namespace {

std::int64_t parse_integer(const std::string& s, const std::string& whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw InvalidArgument("not a rational number: '" + whole + "'");
  if (s.size() > 18) throw InvalidArgument("rational out of range: '" + whole + "'");
  return std::stoll(s);
}

ExactComplex operator*(const ExactComplex& p, const ExactComplex& q) {
  return {p.re * q.re - p.im * q.im, p.re * q.im + p.im * q.re};
}
ExactComplex operator+(const ExactComplex& p, const ExactComplex& q) { return {p.re + q.re, p.im + q.im}; }
ExactComplex operator-(const ExactComplex& p, const ExactComplex& q) { return {p.re - q.re, p.im - q.im}; }

using Vec6 = std::array<Rational, 6>;  // (dx^1, dx^2, dx^3, dy^1, dy^2, dy^3) of a tangent vector

Rational symplectic(const Vec6& u, const Vec6& v) {
  Rational s = 0;
  for (int j = 0; j < 3; ++j) s += u[j] * v[3 + j] - v[j] * u[3 + j];
  return s;
}

// dz^1 ^ dz^2 ^ dz^3 (u, v, w) with dz = dx + i dy.
ExactComplex holomorphic_volume(const Vec6& u, const Vec6& v, const Vec6& w) {
  std::array<std::array<ExactComplex, 3>, 3> M;
  const std::array<const Vec6*, 3> rows{&u, &v, &w};
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j) M[r][j] = {(*rows[r])[j], (*rows[r])[3 + j]};
  return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
}

bool all_zero(const Case1Report& r, const std::string& prefix) {
  return std::all_of(r.checks.begin(), r.checks.end(), [&](const ExactCheck& c) {
    return c.name.rfind(prefix, 0) != 0 || c.value.is_zero();
  });
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InvalidArgument("empty rational");
  bool negative = false;
  std::string body = s;
  if (body[0] == '-' || body[0] == '+') {
    negative = body[0] == '-';
    body = body.substr(1);
  }
  Rational r;
  if (const auto slash = body.find('/'); slash != std::string::npos) {
    const std::int64_t den = parse_integer(body.substr(slash + 1), text);
    if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    r = Rational(parse_integer(body.substr(0, slash), text), den);
  } else if (const auto dot = body.find('.'); dot != std::string::npos) {
    const std::string frac = body.substr(dot + 1);
    const std::string whole = dot == 0 ? "0" : body.substr(0, dot);
    if (frac.size() > 17) throw InvalidArgument("too many decimals in '" + text + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    r = Rational(parse_integer(whole, text)) + (frac.empty() ? Rational(0) : Rational(parse_integer(frac, text), den));
  } else {
    r = Rational(parse_integer(body, text));
  }
  return negative ? -r : r;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

AffineCaseOneCycle AffineCaseOneCycle::from_parameters(Rational a, Rational b, Rational alpha, Rational beta,
                                                       Rational gamma, Rational alpha_t, Rational beta_t,
                                                       Rational gamma_t) {
  if (b.numerator() == 0) throw InvalidArgument("case (i) cycle needs b != 0");
  AffineCaseOneCycle c;
  c.a = a;
  c.b = b;
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = gamma;
  c.alpha_t = alpha_t;
  c.beta_t = beta_t;
  c.gamma_t = gamma_t;
  c.h_x1 = 0;
  c.h_y1 = -1 / b;
  c.h_y2 = -a / b;
  c.h_0 = gamma / b;
  return c;
}

bool Case1Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ExactCheck& c) { return c.value.is_zero(); });
}

Case1Report case1_conditions_check(const AffineCaseOneCycle& c) {
  if (c.b.numerator() == 0) throw InvalidArgument("case (i) cycle needs b != 0");
  // x^2 = a x^1 + alpha, x^3 = b x^1 + beta, y^3 = h(x^1, y^1, y^2)
  const Vec6 t_x1{1, c.a, c.b, 0, 0, c.h_x1};
  const Vec6 t_y1{0, 0, 0, 1, 0, c.h_y1};
  const Vec6 t_y2{0, 0, 0, 0, 1, c.h_y2};
  Case1Report r;
  r.checks.push_back({"lagrangian_x1_y1", {symplectic(t_x1, t_y1), 0}});
  r.checks.push_back({"lagrangian_x1_y2", {symplectic(t_x1, t_y2), 0}});
  r.checks.push_back({"lagrangian_y1_y2", {symplectic(t_y1, t_y2), 0}});
  r.checks.push_back({"special_im_volume", {holomorphic_volume(t_x1, t_y1, t_y2).im, 0}});
  return r;
}

bool Case1Transform::holomorphic() const { return all_zero(report, "ju_minus_v"); }
bool Case1Transform::flat() const { return all_zero(report, "curvature"); }

Case1Transform case1_transform(const AffineCaseOneCycle& c, std::optional<std::array<Rational, 3>> override_dir) {
  if (c.b.numerator() == 0) throw InvalidArgument("case (i) cycle needs b != 0");
  Case1Transform t;
  t.base_direction = {1, c.a, c.b};
  t.base_offset = {0, c.alpha, c.beta};
  t.fibre_direction = override_dir.value_or(std::array<Rational, 3>{1, c.a, c.b});
  t.fibre_offset = {0, c.alpha_t, c.beta_t};
  t.connection[0] = {c.gamma_t, 0, 0};
  t.connection[1] = {-c.gamma, 0, 0};

  // u = (base direction; 0), v = (0; fibre direction), J d/dx_j = d/dy~_j
  const Vec6 u{t.base_direction[0], t.base_direction[1], t.base_direction[2], 0, 0, 0};
  const Vec6 v{0, 0, 0, t.fibre_direction[0], t.fibre_direction[1], t.fibre_direction[2]};
  Vec6 ju{};
  for (int j = 0; j < 3; ++j) {
    ju[j] = -u[3 + j];
    ju[3 + j] = u[j];
  }
  static const char* const kNames[6] = {"ju_minus_v_x1", "ju_minus_v_x2", "ju_minus_v_x3",
                                        "ju_minus_v_yt1", "ju_minus_v_yt2", "ju_minus_v_yt3"};
  for (int k = 0; k < 6; ++k) t.report.checks.push_back({kNames[k], {ju[k] - v[k], 0}});
  // F = i (d_x1 A_yt1 - d_yt1 A_x1) dx_1 ^ dy~_1
  const Rational f = t.connection[1][1] - t.connection[0][2];
  t.report.checks.push_back({"curvature_x1_yt1", {0, f}});

  t.mirror = AffineCaseOneCycle::from_parameters(c.a, c.b, c.alpha, c.beta, c.gamma_t, c.alpha_t, c.beta_t,
                                                 -c.gamma);
  return t;
}

Case2Residuals case2_residuals(const Expression& fe, const Expression& ge, const Expression& he, const Grid& grid,
                               double affine_tolerance) {
  if (grid.dimension() != 3) throw InvalidArgument("case (ii) residuals need a grid over (x1, x2, y1)");
  const std::vector<std::string> vars{"x1", "x2", "y1"};
  const ScalarField f = sample(fe, grid, vars), g = sample(ge, grid, vars), h = sample(he, grid, vars);
  std::array<ScalarField, 3> df{partial_derivative(f, 0, 1), partial_derivative(f, 1, 1), partial_derivative(f, 2, 1)};
  std::array<ScalarField, 3> dg{partial_derivative(g, 0, 1), partial_derivative(g, 1, 1), partial_derivative(g, 2, 1)};
  std::array<ScalarField, 3> dh{partial_derivative(h, 0, 1), partial_derivative(h, 1, 1), partial_derivative(h, 2, 1)};

  const std::size_t N = grid.node_count();
  Case2Residuals r{ScalarField(grid, "omega_12"), ScalarField(grid, "omega_13"), ScalarField(grid, "omega_23"),
                   ScalarField(grid, "det_hess_f")};
  for (std::size_t n = 0; n < N; ++n) {
    // tangent of the coordinate line along axis a: dx = (d_a x1, d_a x2, d_a f), dy = (d_a y1, d_a g, d_a h)
    std::array<std::array<Complex, 6>, 3> t;
    for (int a = 0; a < 3; ++a)
      t[a] = {a == 0 ? 1.0 : 0.0, a == 1 ? 1.0 : 0.0, df[a][n], a == 2 ? 1.0 : 0.0, dg[a][n], dh[a][n]};
    auto w = [&](int p, int q) {
      Complex s = 0.0;
      for (int j = 0; j < 3; ++j) s += t[p][j] * t[q][3 + j] - t[q][j] * t[p][3 + j];
      return s;
    };
    r.omega_12[n] = w(0, 1);
    r.omega_13[n] = w(0, 2);
    r.omega_23[n] = w(1, 2);
  }
  const ScalarField f11 = hessian_entry(f, 0, 0), f22 = hessian_entry(f, 1, 1), f12 = hessian_entry(f, 0, 1);
  r.special = f11 * f22 - f12 * f12;
  r.lagrangian_max = std::max({r.omega_12.max_abs(), r.omega_13.max_abs(), r.omega_23.max_abs()});
  r.special_max = r.special.max_abs();
  double hess = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) hess = std::max(hess, hessian_entry(f, a, b).max_abs());
  r.f_affine = hess <= affine_tolerance;
  return r;
}

}  // namespace mirrorforge
