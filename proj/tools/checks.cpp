#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <mirrorforge/error.hpp>
#include <mirrorforge/random.hpp>

namespace mirrorforge::cli {

namespace {

using CheckFn = void (*)(const std::string& id, Context& ctx, CheckResult& r);

void set_status(CheckResult& r, bool ok) { r.status = ok ? "pass" : "fail"; }

Expression expr(const std::string& text) { return parse_expression(text); }

std::vector<std::string> axis_names(int n, bool with_y) {
  std::vector<std::string> out;
  for (int j = 1; j <= n; ++j) out.push_back("x" + std::to_string(j));
  if (with_y)
    for (int j = 1; j <= n; ++j) out.push_back("y" + std::to_string(j));
  return out;
}

void check_ma(const std::string&, Context& ctx, CheckResult& r) {
  const GeometryConfig& g = ctx.scenario().geometry();
  const auto geo = ctx.geometry();
  double residual;
  if (const MongeAmpereResult* ma = ctx.ma_result()) {
    r.metrics["solved"] = true;
    r.metrics["steps"] = ma->diagnostics.steps;
    r.metrics["converged"] = ma->diagnostics.converged;
    r.metrics["requested_c"] = number(ma->requested_c);
    r.metrics["compatible_c"] = number(ma->compatible_c);
    residual = ma->diagnostics.residual;
    set_status(r, ma->diagnostics.converged && residual < r.tolerance);
  } else {
    r.metrics["solved"] = false;
    residual = interior_max(ma_residual(geo->potential()));
    set_status(r, residual < r.tolerance);
  }
  r.metrics["final_residual"] = number(residual);
  r.residual = residual;
  if (ctx.grid().periodic()) {
    const double trunc = ma_truncation_error(ctx.initial_potential().phi);
    r.metrics["truncation_error"] = number(trunc);
    r.metrics["spectral_defect"] = number(spectral_ma_defect(geo->potential()));
    r.refinement = trunc;
    r.refinement_name = "truncation_error";
  } else if (!g.exact.empty()) {
    const ScalarField exact = sample(expr(g.exact), ctx.grid());
    const double err = (geo->potential().phi.values() - exact).max_abs();
    r.metrics["solution_error"] = number(err);
    r.refinement = err;
    r.refinement_name = "solution_error";
  }
  r.metrics["calabi_identity_residual"] = number(calabi_identity_residual(*geo));
}

void check_slag(const std::string&, Context& ctx, CheckResult& r) {
  const SectionCycle& cycle = ctx.cycle();
  if (const SlagResult* s = ctx.slag_result()) {
    r.metrics["solved"] = true;
    r.metrics["steps"] = s->diagnostics.steps;
    r.metrics["converged"] = s->diagnostics.converged;
    r.metrics["phase_defect"] = number(s->phase_defect);
  } else {
    r.metrics["solved"] = false;
  }
  const double res = interior_max(slag_residual(cycle));
  const double lag = lagrangian_residual(cycle);
  r.metrics["slag_residual"] = number(res);
  r.metrics["lagrangian_residual"] = number(lag);
  r.residual = res;
  set_status(r, res < r.tolerance && lag < r.tolerance);
}

int mirror_depth(Context& ctx) {
  const Grid& g = ctx.grid();
  if (g.periodic()) return 0;
  return std::max(1, static_cast<int>(std::ceil(ctx.scenario().geometry().margin * g.resolution(0))));
}

void check_f02(const std::string&, Context& ctx, CheckResult& r) {
  const int depth = mirror_depth(ctx);
  const double v = f02_residual(ctx.mirror(), depth);
  r.metrics["f02_residual"] = number(v);
  r.metrics["f02_all_nodes"] = number(f02_residual(ctx.mirror()));
  const Domain& dd = ctx.dual()->grid().domain();
  Json lo = Json::array(), hi = Json::array();
  for (int j = 0; j < dd.dimension(); ++j) {
    lo.push_back(dd.lower(j));
    hi.push_back(dd.upper(j));
  }
  r.metrics["dual_lower"] = lo;
  r.metrics["dual_upper"] = hi;
  r.metrics["min_boundary_depth"] = depth;
  r.residual = v;
  set_status(r, v < r.tolerance);
}

void check_dhym(const std::string&, Context& ctx, CheckResult& r) {
  const ScalarField field = dhym_residual(ctx.mirror());
  const int depth = mirror_depth(ctx);
  const double v = interior_max(field, depth);
  r.metrics["dhym_residual"] = number(v);
  r.metrics["dhym_all_nodes"] = number(field.max_abs());
  r.metrics["min_boundary_depth"] = depth;
  r.metrics["kappa_dhym"] = number(kappa_dhym(ctx.grid().dimension()));
  r.residual = v;
  set_status(r, v < r.tolerance);
}

void check_kappa(const std::string&, Context& ctx, CheckResult& r) {
  const MirrorConnection& mc = ctx.mirror();
  const DualGeometry& dual = *ctx.dual();
  const ScalarField slag = dual.compose(slag_residual(ctx.cycle()));
  const ScalarField detg = dual.compose(ctx.geometry()->det_hessian());
  const ScalarField dhym = dhym_residual(mc);
  const Grid& grid = dual.grid();
  const double scale = slag.max_abs();
  if (scale == 0.0) throw InvalidArgument("kappa check needs a nonzero slag residual (use a theta offset)");
  double lo = 0.0, hi = 0.0, sum = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.on_boundary(n) || std::abs(slag[n]) < 1e-8 * scale) continue;
    const double d = detg[n].real();
    const double ratio = dhym[n].real() / (slag[n].real() / (d * d));
    if (count == 0) lo = hi = ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
    ++count;
  }
  if (count == 0) throw InvalidArgument("kappa check found no usable nodes");
  const double mean = sum / static_cast<double>(count);
  const double expected = kappa_dhym(ctx.grid().dimension());
  const double spread = (hi - lo) / std::abs(mean);
  r.metrics["measured_kappa"] = number(mean);
  r.metrics["expected_kappa"] = number(expected);
  r.metrics["relative_spread"] = number(spread);
  r.metrics["nodes"] = count;
  r.residual = spread;
  set_status(r, spread < r.tolerance && std::abs(mean - expected) < r.tolerance * std::abs(expected));
}

void check_cs(const std::string&, Context& ctx, CheckResult& r) {
  const CSReport rep = cs_equality_report(ctx.cycle(), ctx.connection(), ctx.dual());
  r.metrics = to_json(rep);
  r.metrics["flatness_residual"] = number(flatness_residual(ctx.connection()));
  r.residual = rep.relative_mismatch;
  set_status(r, rep.relative_mismatch < r.tolerance);
}

void check_harmonic(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  const SectionCycle& cycle = ctx.cycle();
  const Grid& grid = ctx.grid();
  const int m = grid.dimension();
  DifferentialForm B(grid, m, 1);
  if (s.has("dual_axis")) {
    const int k = s.integer("dual_axis", 1) - 1;
    if (k < 0 || k >= m) throw InvalidArgument("dual_axis out of range");
    std::vector<ScalarField> c;
    for (int j = 0; j < m; ++j) c.push_back(cycle.geometry().hessian(k, j));
    B = DifferentialForm::one_form(c, m);
    r.metrics["form"] = "dxt" + std::to_string(k + 1);
  } else if (s.has("exact")) {
    const ScalarField chi = sample(expr(s.text("exact", "0")), grid);
    DifferentialForm base = DifferentialForm::function(chi, m);
    std::string label = "d(" + s.text("exact", "0") + ")";
    if (s.has("exact_axis")) {
      const int k = s.integer("exact_axis", 1) - 1;
      if (k < 0 || k >= m) throw InvalidArgument("exact_axis out of range");
      base = wedge(base, DifferentialForm::monomial(grid, m, {k}));
      label = "d((" + s.text("exact", "0") + ") dx" + std::to_string(k + 1) + ")";
    }
    B = exterior_derivative(base);
    r.metrics["form"] = label;
  } else {
    throw InvalidArgument("[" + id + "] needs 'exact' or 'dual_axis'");
  }
  if (s.flag("hodge", false)) {
    B = hodge_star(B, induced_metric(cycle));
    r.metrics["form"] = "*" + r.metrics["form"].get<std::string>();
  }
  const auto base_pair = harmonic_residual(B, cycle);
  const int depth = mirror_depth(ctx);
  const auto pair =
      deformed_harmonic_residual(transform_form(B, FormTransform::Phi, *ctx.dual()), ctx.mirror(), depth);
  r.metrics["min_boundary_depth"] = depth;
  r.metrics["q"] = B.degree();
  r.metrics["closed_residual"] = number(base_pair.first);
  r.metrics["coclosed_residual"] = number(base_pair.second);
  r.metrics["dbar_residual"] = number(pair.first);
  r.metrics["imaginary_residual"] = number(pair.second);
  const std::string expect = s.text("expect", "harmonic");
  r.metrics["expect"] = expect;
  if (expect == "harmonic") {
    r.residual = std::max(pair.first, pair.second);
    set_status(r, pair.first < r.tolerance && pair.second < r.tolerance);
  } else if (expect == "control") {
    const double floor = s.number("control_floor", 0.05);
    r.metrics["control_floor"] = number(floor);
    r.residual = pair.second;
    set_status(r, pair.second > floor);
  } else {
    throw InvalidArgument("[" + id + "] expect must be harmonic or control");
  }
}

void check_moduli(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  const int tuples = s.integer("tuples", 5);
  const Grid& grid = ctx.grid();
  const int m = grid.dimension();
  const DualGeometry& dual = *ctx.dual();
  Xorshift64Star rng(ctx.scenario().seed());
  auto random_constant_form = [&] {
    std::vector<ScalarField> c;
    for (int k = 0; k < m; ++k) c.push_back(ScalarField::constant(grid, rng.uniform(-1.0, 1.0)));
    return DifferentialForm::one_form(c, m);
  };
  std::vector<Complex> ratios;
  double antisymmetry = 0.0;
  Json values = Json::array();
  for (int t = 0; t < tuples; ++t) {
    std::vector<DifferentialForm> a, b;
    for (int k = 0; k < m; ++k) {
      const DifferentialForm eta = random_constant_form(), mu = random_constant_form();
      DifferentialForm tau = mu;
      tau *= Complex(0.0, 1.0);
      tau += eta;
      a.push_back(tau);
      b.push_back(moduli_tangent_transform(eta, mu, dual));
    }
    const Complex A = a_moduli_m_form(a), Bv = b_moduli_m_form(b, dual);
    if (m >= 2) {
      std::swap(a[0], a[1]);
      std::swap(b[0], b[1]);
      const Complex As = a_moduli_m_form(a), Bs = b_moduli_m_form(b, dual);
      antisymmetry = std::max({antisymmetry, std::abs(As + A) / std::abs(A), std::abs(Bs + Bv) / std::abs(Bv)});
    }
    ratios.push_back(Bv / A);
    values.push_back(Json{{"a", complex_number(A)}, {"b", complex_number(Bv)}});
  }
  double spread = 0.0;
  for (Complex z : ratios) spread = std::max(spread, std::abs(z - ratios.front()) / std::abs(ratios.front()));
  r.metrics["kappa_prime"] = complex_number(ratios.front());
  r.metrics["expected_kappa_prime"] = complex_number(kKappaModuli);
  r.metrics["relative_spread"] = number(spread);
  r.metrics["antisymmetry_error"] = number(antisymmetry);
  r.metrics["tuples"] = values;
  r.residual = spread;
  set_status(r, spread < r.tolerance && antisymmetry < 1e-12);
}

void check_case1(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  auto q = [&](const char* key, const char* fallback) { return parse_rational(s.text(key, fallback)); };
  AffineCaseOneCycle c = AffineCaseOneCycle::from_parameters(q("a", "1"), q("b", "1"), q("alpha", "0"), q("beta", "0"),
                                                             q("gamma", "0"), q("alpha_t", "0"), q("beta_t", "0"),
                                                             q("gamma_t", "0"));
  if (s.has("h_x1")) c.h_x1 = q("h_x1", "0");
  if (s.has("h_y1")) c.h_y1 = q("h_y1", "0");
  if (s.has("h_y2")) c.h_y2 = q("h_y2", "0");
  std::optional<std::array<Rational, 3>> dir;
  if (s.has("fibre_direction")) {
    const std::string text = s.text("fibre_direction", "");
    std::array<Rational, 3> d;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const std::size_t comma = text.find(',', start);
      if ((k < 2) != (comma != std::string::npos)) throw InvalidArgument("fibre_direction needs three rationals");
      d[k] = parse_rational(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      start = comma + 1;
    }
    dir = d;
  }
  const Case1Report cond = case1_conditions_check(c);
  const Case1Transform tr = case1_transform(c, dir);
  const Case1Transform twice = case1_transform(tr.mirror);
  const bool slopes_back = twice.mirror.a == c.a && twice.mirror.b == c.b;
  const bool ok = cond.passed() && tr.holomorphic() && tr.flat();
  r.metrics["conditions"] = to_json(cond);
  r.metrics["transform"] = to_json(tr);
  r.metrics["twice_keeps_slopes"] = slopes_back;
  const std::string expect = s.text("expect", "pass");
  if (expect != "pass" && expect != "violation") throw InvalidArgument("[" + id + "] expect must be pass or violation");
  r.metrics["expect"] = expect;
  double worst = 0.0;
  for (const auto* rep : {&cond, &tr.report})
    for (const auto& ch : rep->checks)
      worst = std::max({worst, std::abs(boost::rational_cast<double>(ch.value.re)),
                        std::abs(boost::rational_cast<double>(ch.value.im))});
  r.residual = worst;
  r.exact = true;
  set_status(r, ok == (expect == "pass") && slopes_back);
}

void check_case2(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  std::vector<double> lo = s.numbers("lower"), hi = s.numbers("upper");
  if (lo.empty()) lo.assign(3, 0.0);
  if (hi.empty()) hi.assign(3, 1.0);
  const Grid grid(Domain::box(lo, hi), ctx.scenario().geometry().resolution);
  const Case2Residuals c =
      case2_residuals(expr(s.text("f", "x1")), expr(s.text("g", "0")), expr(s.text("h", "-y1")), grid);
  r.metrics["lagrangian_residual"] = number(c.lagrangian_max);
  r.metrics["det_hessian_f"] = number(c.special_max);
  r.metrics["f_affine"] = c.f_affine;
  const std::string expect = s.text("expect_special", "any");
  r.metrics["expect_special"] = expect;
  bool special_ok = true;
  if (expect == "zero")
    special_ok = c.special_max < r.tolerance;
  else if (expect == "nonzero")
    special_ok = c.special_max >= r.tolerance;
  else if (expect != "any")
    throw InvalidArgument("[" + id + "] expect_special must be zero, nonzero or any");
  r.residual = c.lagrangian_max;
  set_status(r, c.lagrangian_max < r.tolerance && special_ok);
}

void check_cover(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  std::vector<LiftedField> sections;
  for (const auto& e : s.list("sections")) sections.push_back(LiftedField::from_expression(expr(e), ctx.grid()));
  const std::string expect = s.text("expect", "separated");
  if (expect != "separated" && expect != "ramified")
    throw InvalidArgument("[" + id + "] expect must be separated or ramified");
  r.metrics["expect"] = expect;
  r.metrics["sheets"] = sections.size();
  try {
    const CoverTransform cover = multisection_cover_transform(ctx.geometry(), sections, ctx.scenario().cycle().theta);
    Json sheets = Json::array();
    double worst = 0.0;
    for (const auto& sh : cover.sheets) {
      sheets.push_back(Json{{"f02_residual", number(sh.f02)}, {"dhym_residual", number(sh.dhym)}});
      worst = std::max({worst, sh.f02, sh.dhym});
    }
    r.metrics["min_separation"] = number(cover.min_separation);
    r.metrics["per_sheet"] = sheets;
    r.residual = worst;
    set_status(r, expect == "separated" && worst < r.tolerance);
  } catch (const RamificationError& e) {
    r.metrics["ramification"] = e.what();
    set_status(r, expect == "ramified");
  }
}

void check_cotangent(const std::string& id, Context& ctx, CheckResult& r) {
  const IniSection& s = ctx.scenario().settings(id);
  const Grid& grid = ctx.grid();
  const int n = s.integer("n", grid.dimension());
  const std::string phi = s.text("phi_l", "0");
  CotangentLiftConfig cfg{
      n,
      phi == "random" ? random_bundle_potential(grid, ctx.scenario().seed(), s.integer("max_mode", 1),
                                                s.number("amplitude", 0.3))
                      : sample(expr(phi), grid, axis_names(n, grid.dimension() == 2 * n)),
      {},
      {}};
  if (s.has("theta")) cfg.theta = s.number("theta", 0.0);
  const CotangentReport rep = cotangent_theta_check(cfg);
  r.metrics = to_json(rep);
  r.residual = rep.difference;
  r.exact = r.tolerance == 0.0;
  set_status(r, rep.difference <= r.tolerance && rep.theta_hol_real_part <= r.tolerance);
}

void check_dual(const std::string&, Context& ctx, CheckResult& r) {
  const InvolutionReport rep = dual_of_dual(*ctx.geometry(), ctx.dual_options());
  r.metrics["round_trip_error"] = number(rep.round_trip);
  r.metrics["hessian_error"] = number(rep.hessian_error);
  r.metrics["potential_error"] = number(rep.potential_error);
  r.metrics["calabi_identity_residual"] = number(calabi_identity_residual(*ctx.dual()));
  r.residual = rep.hessian_error;
  set_status(r, rep.round_trip < r.tolerance && rep.hessian_error < r.tolerance);
}

const std::map<std::string, CheckFn>& table() {
  static const std::map<std::string, CheckFn> t{
      {"ma", check_ma},         {"slag", check_slag},       {"f02", check_f02},     {"dhym", check_dhym},
      {"kappa", check_kappa},   {"cs", check_cs},           {"harmonic", check_harmonic},
      {"moduli", check_moduli}, {"case1", check_case1},     {"case2", check_case2}, {"cover", check_cover},
      {"cotangent", check_cotangent}, {"dual", check_dual}};
  return t;
}

}  // namespace

double interior_max(const ScalarField& field, int min_depth) {
  const Grid& g = field.grid();
  double worst = 0.0;
  for (std::size_t n = 0; n < g.node_count(); ++n)
    if (g.periodic() || g.boundary_depth(n) >= min_depth) worst = std::max(worst, std::abs(field[n]));
  return worst;
}

Context::Context(const Scenario& scenario) : scenario_(scenario), grid_(scenario.grid()) {}

const KahlerPotential& Context::initial_potential() {
  if (!initial_) {
    const GeometryConfig& g = scenario_.geometry();
    const std::string& text = g.phi == "solve" ? g.initial : g.phi;
    initial_ = KahlerPotential::from_expression(expr(text), grid_, g.c);
  }
  return *initial_;
}

std::shared_ptr<const SemiFlatGeometry> Context::geometry() {
  if (!geometry_) {
    const GeometryConfig& g = scenario_.geometry();
    if (g.phi == "solve") {
      ma_ = solve_monge_ampere(initial_potential(), g.c, scenario_.solver_tolerance());
      geometry_ = std::make_shared<const SemiFlatGeometry>(ma_->potential);
    } else {
      geometry_ = std::make_shared<const SemiFlatGeometry>(initial_potential());
    }
  }
  return geometry_;
}

const MongeAmpereResult* Context::ma_result() {
  geometry();
  return ma_ ? &*ma_ : nullptr;
}

const SectionCycle& Context::cycle() {
  if (!cycle_) {
    const CycleConfig& c = scenario_.cycle();
    if (c.f == "solve") {
      slag_ = solve_slag_section(geometry(), c.theta, LiftedField::from_expression(expr(c.initial), grid_),
                                 scenario_.solver_tolerance());
      cycle_ = slag_->cycle;
    } else {
      cycle_ = SectionCycle(geometry(), LiftedField::from_expression(expr(c.f), grid_), c.theta);
    }
  }
  return *cycle_;
}

const SlagResult* Context::slag_result() {
  cycle();
  return slag_ ? &*slag_ : nullptr;
}

const ConnectionOnC& Context::connection() {
  if (!connection_) {
    const CycleConfig& c = scenario_.cycle();
    if (c.connection == "random")
      connection_ = ConnectionOnC::random(grid_, c.rank, scenario_.seed(), c.max_mode, c.amplitude);
    else if (c.connection == "potential")
      connection_ = ConnectionOnC::from_potential(LiftedField::from_expression(expr(c.e), grid_));
    else
      connection_ = ConnectionOnC::zero(grid_, c.rank);
  }
  return *connection_;
}

DualOptions Context::dual_options() const {
  DualOptions o;
  const std::string& method = scenario_.geometry().interpolation;
  if (method != "auto") o.interpolation = interpolation_from_string(method);
  return o;
}

std::shared_ptr<const DualGeometry> Context::dual() {
  if (!dual_) dual_ = std::make_shared<const DualGeometry>(DualGeometry::build(*geometry(), dual_options()));
  return dual_;
}

const MirrorConnection& Context::mirror() {
  if (!mirror_) mirror_ = fm_transform(cycle(), connection(), dual());
  return *mirror_;
}

CheckResult run_check(const std::string& id, Context& ctx) {
  CheckResult r;
  r.id = id;
  r.tolerance = ctx.scenario().tolerance(id);
  const auto start = std::chrono::steady_clock::now();
  try {
    table().at(check_base(id))(id, ctx, r);
  } catch (const Error& e) {
    r.status = "error";
    r.message = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace mirrorforge::cli
