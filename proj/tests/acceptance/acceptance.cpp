// Acceptance run: one PASS/FAIL line per criterion, INFO lines for supporting numbers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <mirrorforge/acycle.hpp>
#include <mirrorforge/dual.hpp>
#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/semiflat.hpp>
#include <mirrorforge/transform.hpp>

#include "report.hpp"
#include "scenario.hpp"

using namespace mirrorforge;
using namespace mirrorforge::cli;

namespace {

const double kOrder = 2.0, kBand = 0.3;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + fmt(x);
  return "[" + s + "]";
}

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Scenario load(const std::string& name) { return Scenario::load(std::string(MIRRORFORGE_SCENARIOS) + "/" + name); }

const CheckResult& result(const RunOutcome& run, const std::string& id) {
  for (const auto& r : run.results)
    if (r.id == id) return r;
  throw InvalidArgument("no check '" + id + "' in the run");
}

double metric(const CheckResult& r, const std::string& key) {
  const Json& v = r.metrics.at(key);
  return v.is_null() ? NAN : v.get<double>();
}

Complex complex_metric(const CheckResult& r, const std::string& key) {
  const Json& v = r.metrics.at(key);
  return {v["re"].get<double>(), v["im"].get<double>()};
}

// |CS_hol - kappa CS| / |CS|
double cs_mismatch(const CheckResult& r) {
  const Complex cs = complex_metric(r, "cs"), hol = complex_metric(r, "cs_hol"), kappa = complex_metric(r, "kappa");
  return std::abs(hol - kappa * cs) / std::abs(cs);
}

// Tracked values and successive orders of one check of a convergence report.
struct Series {
  std::vector<double> h, value, order;
  std::vector<std::string> status;
};

Series series(const ConvergenceOutcome& conv, const std::string& id) {
  Series s;
  for (const auto& row : conv.report["convergence"]["rows"]) {
    const Json& c = row["checks"][id];
    s.h.push_back(row["h"].get<double>());
    s.value.push_back(c["value"].is_null() ? NAN : c["value"].get<double>());
    s.status.push_back(c["status"].get<std::string>());
  }
  for (const auto& o : conv.report["convergence"]["orders"][id]) s.order.push_back(o.is_number() ? o.get<double>() : NAN);
  return s;
}

bool in_band(const Series& s) {
  return !s.order.empty() &&
         std::all_of(s.order.begin(), s.order.end(), [](double p) { return std::abs(p - kOrder) <= kBand; });
}

// Every value below C h^2 with C fixed at the coarsest resolution.
bool below_c_h2(const Series& s, double* c_out = nullptr) {
  const double c = s.value.front() / (s.h.front() * s.h.front());
  if (c_out) *c_out = c;
  for (std::size_t i = 0; i < s.value.size(); ++i)
    if (!(s.value[i] <= c * s.h[i] * s.h[i] * (1 + 1e-12))) return false;
  return true;
}

class Tally {
 public:
  void criterion(int k, bool ok, const std::string& text) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << k << ": " << text << std::endl;
    failed_ += !ok;
  }
  void info(const std::string& text) { std::cout << "INFO  " << text << std::endl; }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

void criterion1(Tally& t) {
  Clock clock;
  const RunOutcome run = run_scenario(load("ma_periodic.ini"));
  const double seconds = clock.seconds();
  const CheckResult& ma = result(run, "ma");
  const ConvergenceOutcome conv = convergence_study(load("ma_periodic.ini"), {16, 32, 64});
  const Series s = series(conv, "ma");
  const double residual = ma.residual.value_or(NAN);
  const bool ok = residual < 1e-8 && in_band(s) && seconds < 30.0;
  t.criterion(1, ok,
              "periodic MA at 64^2 residual " + fmt(residual) + " (< 1e-8) in " + fmt(seconds) +
                  " s (< 30 s); truncation error orders " + list(s.order) + " (2.0 +- 0.3)");

  const ConvergenceOutcome box = convergence_study(load("slag_dhym_m2.ini"), {24, 32, 48, 64});
  t.info("MA solver on a box against the exact radial solution: orders " + list(series(box, "ma").order));
}

void criterion2_and_3(Tally& t) {
  Clock clock;
  struct Study {
    const char* file;
    std::vector<int> n;
    bool f02_band;
  };
  const std::vector<Study> studies{{"slag_dhym_m2.ini", {24, 32, 48, 64}, true},
                                   {"slag_dhym_m2_theta0.ini", {24, 32, 48, 64}, true},
                                   {"slag_dhym_m3.ini", {16, 24, 32, 40}, false},
                                   {"slag_dhym_m3_theta0.ini", {16, 24, 32, 40}, false}};
  bool dhym_ok = true, f02_ok = true;
  std::string dhym_text, f02_text;
  for (const auto& st : studies) {
    const ConvergenceOutcome conv = convergence_study(load(st.file), st.n);
    const Series d = series(conv, "dhym"), f = series(conv, "f02");
    const std::string name = std::filesystem::path(st.file).stem().string();
    dhym_ok = dhym_ok && in_band(d);
    dhym_text += " " + name + " " + list(d.order) + ";";
    double c = 0.0;
    const bool f_ok = st.f02_band ? in_band(f) : below_c_h2(f, &c);
    f02_ok = f02_ok && f_ok;
    f02_text += " " + name + (st.f02_band ? " orders " + list(f.order) : " below " + fmt(c) + " h^2, orders " + list(f.order)) + ";";
  }

  const RunOutcome kappa = run_scenario(load("kappa.ini"));
  const CheckResult& k = result(kappa, "kappa");
  const double measured = metric(k, "measured_kappa"), expected = metric(k, "expected_kappa");
  const double spread = metric(k, "relative_spread");
  const bool kappa_ok = spread < 1e-6 && std::abs(measured - expected) < 1e-6 * std::abs(expected);
  const double seconds = clock.seconds();
  t.criterion(2, dhym_ok && kappa_ok && seconds < 120.0,
              "dHYM orders" + dhym_text + " kappa ratio " + fmt(measured) + " vs " + fmt(expected) + ", spread " +
                  fmt(spread) + " (< 1e-6); " + fmt(seconds) + " s (< 120 s)");

  // A = i xt2 dyt1 on a flat box: F02 = 1/4 dzt-bar_1 ^ dzt-bar_2 at every resolution.
  std::vector<double> hand;
  for (int n : {8, 16, 32}) {
    const Grid g(Domain::box({0.0, 0.0}, {1.0, 1.0}), n);
    const SemiFlatGeometry geo(KahlerPotential::from_expression(parse_expression("(x1^2 + x2^2)/2"), g));
    auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(geo));
    DifferentialForm A(dual->grid(), 4, 1);
    A.set_component(AxisMask{1} << 2, ScalarField::from_function(dual->grid(), [](std::span<const double> x) {
                      return Complex(0.0, x[1]);
                    }));
    hand.push_back(f02_residual(MirrorConnection(dual, A, 0.0)));
  }
  const auto [lo, hi] = std::minmax_element(hand.begin(), hand.end());
  const bool hand_ok = *lo > 0.1 && *hi - *lo < 1e-10;
  t.criterion(3, f02_ok && hand_ok,
              "F02 of transforms:" + f02_text + " hand-built non-gradient connection F02 " + list(hand) +
                  " at n = 8, 16, 32 (> 0.1, constant)");
}

void criterion4(Tally& t) {
  bool ok = true;
  std::vector<double> mismatch, flatness;
  double worst_seconds = 0.0;
  for (std::uint64_t seed = 11; seed < 16; ++seed) {
    Scenario sc = load("cs_flat.ini");
    sc.override_seed(seed);
    Clock clock;
    const RunOutcome run = run_scenario(sc);
    worst_seconds = std::max(worst_seconds, clock.seconds());
    const CheckResult& cs = result(run, "cs");
    mismatch.push_back(cs_mismatch(cs));
    flatness.push_back(metric(cs, "flatness_residual"));
    ok = ok && mismatch.back() < 1e-3 && flatness.back() > 1e-3;
  }
  Clock clock2;
  const RunOutcome r2 = run_scenario(load("cs_rank2.ini"));
  worst_seconds = std::max(worst_seconds, clock2.seconds());
  const double rank2 = cs_mismatch(result(r2, "cs"));
  const ConvergenceOutcome conv = convergence_study(load("cs_curved.ini"), {16, 24, 32});
  const Series s = series(conv, "cs");
  const bool decreasing = std::is_sorted(s.value.rbegin(), s.value.rend());
  ok = ok && rank2 < 1e-2 && in_band(s) && decreasing && worst_seconds < 180.0;
  t.criterion(4, ok,
              "flat 24^3 rank 1 mismatches " + list(mismatch) + " (< 1e-3, curvature " + list(flatness) +
                  "); rank 2 at 16^3 " + fmt(rank2) + " (< 1e-2); curved geometry mismatch " + list(s.value) +
                  " orders " + list(s.order) + "; slowest case " + fmt(worst_seconds) + " s (< 180 s)");
}

void criterion5(Tally& t) {
  const ConvergenceOutcome conv = convergence_study(load("harmonic.ini"), {16, 24, 32, 40});
  const Series q1 = series(conv, "harmonic:q1"), q2 = series(conv, "harmonic:q2");
  const Series c1 = series(conv, "harmonic:control_q1"), c2 = series(conv, "harmonic:control_q2");
  double c = 0.0;
  const bool q1_ok = below_c_h2(q1, &c);
  auto all_pass = [](const Series& s) {
    return std::all_of(s.status.begin(), s.status.end(), [](const std::string& x) { return x == "pass"; });
  };
  const bool ok = in_band(q2) && q1_ok && all_pass(c1) && all_pass(c2);
  t.criterion(5, ok,
              "q = 2 pair " + list(q2.value) + " orders " + list(q2.order) + "; q = 1 pair " + list(q1.value) +
                  " below " + fmt(c) + " h^2; controls " + list(c1.value) + " and " + list(c2.value) + " (> 0.05)");

  // q = 2 with F != 0: flat box, f = 0.4 (x1^2 - x2^2), B = *_G d(x1 x3) is harmonic for the constant induced metric.
  std::vector<double> second;
  for (int n : {8, 16, 32}) {
    const Grid g(Domain::box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}), n);
    auto geo = std::make_shared<const SemiFlatGeometry>(
        KahlerPotential::from_expression(parse_expression("(x1^2 + x2^2 + x3^2)/2"), g));
    const SectionCycle cycle(geo, LiftedField::from_expression(parse_expression("0.4*(x1^2 - x2^2)"), g), 0.0);
    auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(*geo));
    const DifferentialForm B = hodge_star(
        exterior_derivative(DifferentialForm::function(sample(parse_expression("x1*x3"), g), 3)), induced_metric(cycle));
    const MirrorConnection mc = fm_transform(cycle, ConnectionOnC::zero(g, 1), dual);
    second.push_back(deformed_harmonic_residual(transform_form(B, FormTransform::Phi, *dual), mc,
                                                static_cast<int>(std::ceil(0.25 * n)))
                         .second);
  }
  t.info("q = 2 with nonzero curvature (flat box, f = 0.4(x1^2 - x2^2), B = *d(x1 x3)): second residual " + list(second) +
         " at n = 8, 16, 32");
}

void criterion6(Tally& t) {
  const RunOutcome run = run_scenario(load("moduli.ini"));
  const CheckResult& m = result(run, "moduli");
  const Json& k = m.metrics.at("kappa_prime");
  t.criterion(6, m.passed(),
              "kappa' = " + fmt(k["re"].get<double>()) + (k["im"].get<double>() < 0 ? " - " : " + ") +
                  fmt(std::abs(k["im"].get<double>())) + "i over " +
                  std::to_string(m.metrics.at("tuples").size()) + " tuples, spread " +
                  fmt(metric(m, "relative_spread")) + " (< 1e-6), antisymmetry " +
                  fmt(metric(m, "antisymmetry_error")) + " (< 1e-12)");
}

void criterion7(Tally& t) {
  Clock clock;
  const RunOutcome run = run_scenario(load("case1.ini"));
  const double seconds = clock.seconds();
  bool ok = seconds < 1.0;
  std::string text;
  for (const auto& r : run.results) {
    ok = ok && r.passed() && r.exact;
    text += " " + r.id + " " + r.status + (r.metrics.value("expect", "pass") == "violation" ? " (violation detected)" : "") + ";";
  }
  t.criterion(7, ok, "exact rational checks:" + text + " " + fmt(seconds) + " s (< 1 s)");
}

void criterion8(Tally& t) {
  const RunOutcome run = run_scenario(load("cotangent_quadratic.ini"));
  const CheckResult& q = result(run, "cotangent");
  const double exact = q.residual.value_or(NAN);
  const ConvergenceOutcome conv = convergence_study(load("cotangent.ini"), {16, 32, 64});
  const Series s = series(conv, "cotangent");
  t.criterion(8, exact == 0.0 && in_band(s),
              "quadratic phi_L difference " + fmt(exact) + " (exactly 0); seeded phi_L " + list(s.value) +
                  " orders " + list(s.order) + " (2.0 +- 0.3)");
}

void criterion9(Tally& t) {
  const RunOutcome run = run_scenario(load("dual.ini"));
  const CheckResult& d = result(run, "dual");
  const double hess = metric(d, "hessian_error"), trip = metric(d, "round_trip_error");
  t.criterion(9, hess < 1e-8 && trip < 1e-8,
              "dual of dual at 64^2: hessian error " + fmt(hess) + ", round trip " + fmt(trip) + " (< 1e-8)");
}

void criterion10(Tally& t) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(MIRRORFORGE_SCENARIOS))
    if (e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::string> differing;
  for (const auto& f : files) {
    const Scenario sc = Scenario::load(f.string());
    if (dump(run_scenario(sc).report) != dump(run_scenario(sc).report)) differing.push_back(f.filename().string());
  }
  const Scenario cot = load("cotangent.ini");
  const bool conv_same = convergence_study(cot, {16, 32, 64}).csv == convergence_study(cot, {16, 32, 64}).csv;
  if (!conv_same) differing.push_back("cotangent convergence table");
  std::string text = std::to_string(files.size()) + " scenario reports and one convergence table compared twice";
  for (const auto& d : differing) text += "; differs: " + d;
  t.criterion(10, differing.empty(), text);
}

}  // namespace

// Arguments select criteria by number; none runs all of them.
int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  Tally t;
  struct Step {
    std::vector<int> criteria;
    void (*run)(Tally&);
  };
  const std::vector<Step> steps{{{1}, criterion1}, {{2, 3}, criterion2_and_3}, {{4}, criterion4},
                                {{5}, criterion5}, {{6}, criterion6},          {{7}, criterion7},
                                {{8}, criterion8}, {{9}, criterion9},          {{10}, criterion10}};
  for (const auto& step : steps) {
    if (!wanted.empty() && std::none_of(step.criteria.begin(), step.criteria.end(), [&](int k) {
          return std::find(wanted.begin(), wanted.end(), k) != wanted.end();
        }))
      continue;
    try {
      step.run(t);
    } catch (const std::exception& e) {
      for (int k : step.criteria) t.criterion(k, false, std::string("error: ") + e.what());
    }
  }
  if (t.failed())
    std::cout << "acceptance: " << t.failed() << " criteria failed" << std::endl;
  else
    std::cout << "acceptance: all criteria pass" << std::endl;
  return t.failed() ? 1 : 0;
}
