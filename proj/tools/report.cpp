#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <mirrorforge/error.hpp>

#ifndef MIRRORFORGE_VERSION
#define MIRRORFORGE_VERSION "unknown"
#endif

namespace mirrorforge::cli {

namespace {

Json scenario_echo(const Scenario& sc) {
  Json config = Json::object();
  for (const auto& s : sc.sections()) {
    Json sec = Json::object();
    for (const auto& [k, e] : s.entries) sec[k] = e.value;
    config[s.name] = sec;
  }
  return Json{{"name", sc.name()},
              {"source", sc.origin()},
              {"seed", sc.seed()},
              {"resolution", sc.geometry().resolution},
              {"checks", sc.checks()},
              {"config", config}};
}

Json environment(const Scenario& sc) {
  return Json{{"version", MIRRORFORGE_VERSION}, {"resolution", sc.geometry().resolution}};
}

Json result_json(const CheckResult& r, bool timing) {
  Json j{{"id", r.id},
         {"status", r.status},
         {"residual", r.residual ? number(*r.residual) : Json(nullptr)},
         {"exact", r.exact},
         {"tolerance", number(r.tolerance)},
         {"metrics", r.metrics}};
  if (r.refinement) j["refinement"] = Json{{"name", r.refinement_name}, {"value", number(*r.refinement)}};
  if (!r.message.empty()) j["message"] = r.message;
  if (timing) j["wall_time_s"] = r.seconds;
  return j;
}

std::optional<double> tracked(const CheckResult& r) { return r.refinement ? r.refinement : r.residual; }

std::string format(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

double observed_order(double r_coarse, double r_fine, double h_coarse, double h_fine) {
  return std::log(r_coarse / r_fine) / std::log(h_coarse / h_fine);
}

RunOutcome run_scenario(const Scenario& scenario, bool timing) {
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  Context ctx(scenario);
  for (const auto& id : scenario.checks()) out.results.push_back(run_check(id, ctx));

  Json checks = Json::array();
  int passed = 0;
  for (const auto& r : out.results) {
    checks.push_back(result_json(r, timing));
    passed += r.passed();
  }
  const int total = static_cast<int>(out.results.size());
  out.exit_code = passed == total ? kExitPass : kExitFail;
  out.report = Json{{"schema_version", kSchemaVersion},
                    {"kind", "verify"},
                    {"scenario", scenario_echo(scenario)},
                    {"environment", environment(scenario)},
                    {"checks", checks},
                    {"summary", Json{{"passed", passed}, {"failed", total - passed},
                                     {"status", out.exit_code == kExitPass ? "pass" : "fail"}}}};
  if (timing)
    out.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ConvergenceOutcome convergence_study(const Scenario& base, const std::vector<int>& resolutions, bool timing) {
  if (resolutions.size() < 3) throw ConfigError("a convergence study needs at least three resolutions");
  const IniSection& conv = base.settings("convergence");
  const bool has_expected = conv.has("expected_order");
  const double expected = conv.number("expected_order", 2.0);
  const double band = conv.number("order_tolerance", 0.3);

  struct Row {
    int n;
    double h;
    std::vector<CheckResult> results;
  };
  std::vector<Row> rows;
  for (int n : resolutions) {
    Scenario sc = base;
    sc.override_resolution(n);
    RunOutcome run = run_scenario(sc, timing);
    rows.push_back({n, sc.grid().max_spacing(), std::move(run.results)});
  }

  const auto& ids = base.checks();
  std::ostringstream csv;
  csv << "n,h";
  for (const auto& id : ids) csv << ',' << id << "_residual," << id << "_order";
  csv << '\n';

  bool ok = true;
  Json orders = Json::object();
  for (const auto& id : ids) orders[id] = Json::array();
  Json json_rows = Json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    csv << row.n << ',' << format(row.h, "%.9e");
    Json jr{{"n", row.n}, {"h", row.h}};
    Json jc = Json::object();
    for (std::size_t c = 0; c < ids.size(); ++c) {
      const CheckResult& r = row.results[c];
      const std::optional<double> value = tracked(r);
      const auto& held = base.order_checks();
      const bool banded = has_expected && std::find(held.begin(), held.end(), r.id) != held.end();
      if (r.status == "error") ok = false;
      std::string residual, order;
      if (value) residual = format(*value, "%.9e");
      Json order_json = nullptr;
      if (r.exact && value && *value == 0.0) {
        order = "exact";
        order_json = "exact";
      } else if (const auto prev = i > 0 ? tracked(rows[i - 1].results[c]) : std::nullopt; prev && value) {
        const double p = observed_order(*prev, *value, rows[i - 1].h, row.h);
        if (std::isfinite(p)) {
          order = format(p, "%.4f");
          order_json = p;
          if (banded && std::abs(p - expected) > band) ok = false;
        } else if (banded) {
          ok = false;
        }
      }
      if (r.exact && value && *value != 0.0 && !r.passed()) ok = false;
      if (i > 0) orders[r.id].push_back(order_json);
      csv << ',' << residual << ',' << order;
      jc[r.id] = Json{{"value", value ? number(*value) : Json(nullptr)},
                      {"order", order_json},
                      {"status", r.status}};
      if (timing) jc[r.id]["wall_time_s"] = r.seconds;
    }
    csv << '\n';
    jr["checks"] = jc;
    json_rows.push_back(jr);
  }

  ConvergenceOutcome out;
  out.csv = csv.str();
  out.exit_code = ok ? kExitPass : kExitFail;
  Json conv_json{{"resolutions", resolutions}, {"rows", json_rows}, {"orders", orders}};
  if (has_expected) {
    conv_json["expected_order"] = expected;
    conv_json["order_tolerance"] = band;
    conv_json["order_checks"] = base.order_checks();
  }
  conv_json["status"] = ok ? "pass" : "fail";
  out.report = Json{{"schema_version", kSchemaVersion},
                    {"kind", "converge"},
                    {"scenario", scenario_echo(base)},
                    {"environment", environment(base)},
                    {"convergence", conv_json}};
  return out;
}

}  // namespace mirrorforge::cli
