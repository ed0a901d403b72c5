#include "mirrorforge/serialize.hpp"

#include <cmath>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_number(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json to_json(const Grid& grid) {
  Json lower = Json::array(), upper = Json::array();
  for (int a = 0; a < grid.dimension(); ++a) {
    lower.push_back(grid.domain().lower(a));
    upper.push_back(grid.domain().upper(a));
  }
  return Json{{"kind", grid.periodic() ? "torus" : "box"},
              {"lower", lower},
              {"upper", upper},
              {"resolution", grid.resolutions()}};
}

Grid grid_from_json(const Json& j) {
  const auto lower = j.at("lower").get<std::vector<double>>();
  const auto upper = j.at("upper").get<std::vector<double>>();
  const auto res = j.at("resolution").get<std::vector<int>>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "torus") {
    std::vector<double> period(lower.size());
    for (std::size_t a = 0; a < lower.size(); ++a) period[a] = upper[a] - lower[a];
    return Grid(Domain::torus(lower, period), res);
  }
  if (kind == "box") return Grid(Domain::box(lower, upper), res);
  throw InvalidArgument("unknown domain kind '" + kind + "'");
}

Json to_json(const ScalarField& field) {
  Json re = Json::array(), im = Json::array();
  const bool real = field.is_real();
  for (Complex v : field.values()) {
    re.push_back(number(v.real()));
    if (!real) im.push_back(number(v.imag()));
  }
  Json out{{"re", re}};
  if (!real) out["im"] = im;
  return out;
}

ScalarField field_from_json(const Json& j, const Grid& grid) {
  const auto re = j.at("re").get<std::vector<double>>();
  if (re.size() != grid.node_count()) throw InvalidArgument("field size does not match grid");
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
  if (im.size() != re.size()) throw InvalidArgument("field imaginary part has the wrong size");
  std::vector<Complex> v(re.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = {re[n], im[n]};
  return ScalarField(grid, std::move(v));
}

Json to_json(const SolverDiagnostics& d) {
  Json history = Json::array();
  for (double r : d.history) history.push_back(number(r));
  return Json{{"steps", d.steps}, {"residual", number(d.residual)}, {"converged", d.converged}, {"history", history}};
}

Json to_json(const KahlerPotential& p, const SolverDiagnostics* diagnostics) {
  Json out{{"dimension", p.dimension()}, {"grid", to_json(p.grid())}, {"c", number(p.c)}};
  const PolynomialLift& lift = p.phi.lift();
  if (!p.source.empty()) {
    out["expression"] = p.source;
  } else {
    out["lift"] = Json{{"constant", lift.constant}, {"linear", lift.linear}, {"quadratic", lift.quadratic}};
    out["remainder"] = to_json(p.phi.remainder());
  }
  if (diagnostics) out["solver"] = to_json(*diagnostics);
  return out;
}

KahlerPotential potential_from_json(const Json& j) {
  const Grid grid = grid_from_json(j.at("grid"));
  const double c = j.at("c").get<double>();
  if (j.contains("expression"))
    return KahlerPotential::from_expression(parse_expression(j.at("expression").get<std::string>()), grid, c);
  PolynomialLift lift;
  lift.constant = j.at("lift").at("constant").get<double>();
  lift.linear = j.at("lift").at("linear").get<std::vector<double>>();
  lift.quadratic = j.at("lift").at("quadratic").get<std::vector<double>>();
  KahlerPotential p{LiftedField(std::move(lift), field_from_json(j.at("remainder"), grid)), c, {}};
  return p;
}

Json to_json(const SectionCycle& cycle) {
  const LiftedField& f = cycle.potential();
  Json out{{"theta", cycle.theta()},
           {"f_lift", Json{{"constant", f.lift().constant}, {"linear", f.lift().linear},
                           {"quadratic", f.lift().quadratic}}},
           {"f_remainder", to_json(f.remainder())}};
  return out;
}

Json to_json(const MirrorConnection& mc) {
  const DifferentialForm A = mc.form().to_frame(Frame::Real);
  Json components = Json::array();
  for (AxisMask mask : A.masks()) {
    for (int r = 0; r < A.rank(); ++r)
      for (int s = 0; s < A.rank(); ++s) {
        const ScalarField c = A.component(mask, r, s);
        if (c.max_abs() == 0.0) continue;
        Json entry{{"axes", mask_axes(mask)}};
        if (A.rank() > 1) entry["entry"] = {r, s};
        const Json values = to_json(c);
        entry["re"] = values.at("re");
        entry["im"] = values.contains("im") ? values.at("im") : Json::array();
        components.push_back(entry);
      }
  }
  return Json{{"theta", mc.theta()},
              {"rank", mc.rank()},
              {"dual_grid", to_json(mc.dual().grid())},
              {"geometry", to_json(mc.dual().base().potential())},
              {"components", components}};
}

Json to_json(const CSReport& r) {
  return Json{{"cs", complex_number(r.cs_value)},
              {"cs_hol", complex_number(r.cs_hol_value)},
              {"kappa", complex_number(r.kappa)},
              {"relative_mismatch", number(r.relative_mismatch)}};
}

Json to_json(const Case1Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"name", c.name}, {"re", to_string(c.value.re)}, {"im", to_string(c.value.im)}});
  return Json{{"exact", true}, {"passed", r.passed()}, {"checks", checks}};
}

Json to_json(const Case1Transform& t) {
  auto vec = [](const std::array<Rational, 3>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
  };
  return Json{{"base_direction", vec(t.base_direction)},
              {"base_offset", vec(t.base_offset)},
              {"fibre_direction", vec(t.fibre_direction)},
              {"fibre_offset", vec(t.fibre_offset)},
              {"connection_dx1", vec(t.connection[0])},
              {"connection_dyt1", vec(t.connection[1])},
              {"holomorphic", t.holomorphic()},
              {"flat", t.flat()},
              {"report", to_json(t.report)}};
}

Json to_json(const CotangentReport& r) {
  Json out{{"difference", number(r.difference)},
           {"theta_hol_real_part", number(r.theta_hol_real_part)},
           {"zero_section_ratio", complex_number(r.zero_section_ratio)},
           {"zero_section_ratio_spread", number(r.zero_section_ratio_spread)}};
  if (r.special_residual) out["special_residual"] = number(*r.special_residual);
  if (r.dhym_residual) out["dhym_residual"] = number(*r.dhym_residual);
  return out;
}

}  // namespace mirrorforge
