#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <mirrorforge/error.hpp>
#include <mirrorforge/expression.hpp>
#include <mirrorforge/special_cases.hpp>

namespace mirrorforge::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void fail(const std::string& message, int line) { throw ConfigError(message, line); }

double evaluate_constant(const std::string& text, int line) {
  try {
    return parse_expression(text).evaluate(std::map<std::string, double>{});
  } catch (const Error& e) {
    fail("not a number: '" + text + "' (" + e.what() + ")", line);
  }
}

void require_expression(const IniSection& s, const std::string& key) {
  const IniEntry* e = s.find(key);
  if (!e || e->value == "solve" || e->value == "random") return;
  try {
    parse_expression(e->value);
  } catch (const SyntaxError& err) {
    fail("[" + s.name + "] " + key + ": " + err.what(), e->line);
  }
}

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario", {"name", "checks", "seed"}},
      {"geometry", {"dimension", "base", "lower", "upper", "resolution", "phi", "initial", "exact", "c", "interpolation", "margin"}},
      {"cycle", {"f", "initial", "theta", "connection", "rank", "e", "max_mode", "amplitude"}},
      {"convergence", {"expected_order", "order_tolerance", "checks"}},
      {"ma", {}},
      {"slag", {}},
      {"f02", {}},
      {"dhym", {}},
      {"kappa", {}},
      {"cs", {}},
      {"dual", {}},
      {"harmonic", {"exact", "exact_axis", "dual_axis", "hodge", "expect", "control_floor"}},
      {"moduli", {"tuples"}},
      {"case1", {"a", "b", "alpha", "beta", "gamma", "alpha_t", "beta_t", "gamma_t", "h_x1", "h_y1", "h_y2",
                 "fibre_direction", "expect"}},
      {"case2", {"f", "g", "h", "lower", "upper", "expect_special"}},
      {"cover", {"sections", "expect"}},
      {"cotangent", {"n", "phi_l", "theta", "max_mode", "amplitude"}},
  };
  return keys;
}

}  // namespace

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::string IniSection::text(const std::string& key, const std::string& fallback) const {
  const IniEntry* e = find(key);
  return e ? e->value : fallback;
}

double IniSection::number(const std::string& key, double fallback) const {
  const IniEntry* e = find(key);
  return e ? evaluate_constant(e->value, e->line) : fallback;
}

int IniSection::integer(const std::string& key, int fallback) const {
  const IniEntry* e = find(key);
  if (!e) return fallback;
  const double v = evaluate_constant(e->value, e->line);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
    fail("[" + name + "] " + key + " must be an integer", e->line);
  return static_cast<int>(v);
}

bool IniSection::flag(const std::string& key, bool fallback) const {
  const IniEntry* e = find(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail("[" + name + "] " + key + " must be true or false", e->line);
}

std::vector<double> IniSection::numbers(const std::string& key) const {
  const IniEntry* e = find(key);
  std::vector<double> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(evaluate_constant(trim(item), e->line));
  return out;
}

std::vector<std::string> IniSection::list(const std::string& key) const {
  const IniEntry* e = find(key);
  std::vector<std::string> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::vector<IniSection> parse_ini(const std::string& text) {
  std::vector<IniSection> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // strip comments outside quotes
    bool quoted = false;
    std::string s;
    for (char c : raw) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      s += c;
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("unterminated section header", line);
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) fail("empty section name", line);
      for (const auto& sec : out)
        if (sec.name == name) fail("duplicate section [" + name + "]", line);
      out.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'", line);
    if (out.empty()) fail("key outside of a section", line);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail("empty key", line);
    if (out.back().has(key)) fail("duplicate key '" + key + "'", line);
    out.back().entries.push_back({key, {unquote(trim(s.substr(eq + 1))), line}});
  }
  return out;
}

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> ids{"ma",       "slag",  "f02",   "dhym",  "kappa",     "cs",  "harmonic",
                                            "moduli",   "case1", "case2", "cover", "cotangent", "dual"};
  return ids;
}

std::string check_base(const std::string& id) { return id.substr(0, id.find(':')); }

double default_tolerance(const std::string& base) {
  static const std::map<std::string, double> t{
      {"ma", 1e-8},     {"slag", 1e-8},    {"f02", 1e-6},   {"dhym", 1e-6},  {"kappa", 1e-6},
      {"cs", 1e-3},     {"harmonic", 1e-2}, {"moduli", 1e-6}, {"case1", 0.0},  {"case2", 1e-10},
      {"cover", 1e-8},  {"cotangent", 1e-8}, {"dual", 1e-8}};
  const auto it = t.find(base);
  return it == t.end() ? 1e-8 : it->second;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Scenario Scenario::parse(const std::string& text, const std::string& origin) {
  Scenario sc;
  sc.origin_ = origin;
  sc.sections_ = parse_ini(text);

  const auto& keys = section_keys();
  const auto& registry = check_registry();
  for (const auto& sec : sc.sections_) {
    const std::string base = check_base(sec.name);
    if (sec.name == "tolerances") {
      for (const auto& [k, e] : sec.entries) {
        if (k != "solver" && std::find(registry.begin(), registry.end(), check_base(k)) == registry.end())
          fail("[tolerances] unknown check '" + k + "'", e.line);
        (void)sec.number(k, 0.0);
      }
      continue;
    }
    const auto it = keys.find(base);
    if (it == keys.end() || (base != sec.name && std::find(registry.begin(), registry.end(), base) == registry.end()))
      fail("unknown section [" + sec.name + "]", sec.line);
    for (const auto& [k, e] : sec.entries)
      if (!it->second.count(k)) fail("[" + sec.name + "] unknown key '" + k + "'", e.line);
  }

  const IniSection& s = sc.settings("scenario");
  const IniEntry* checks = s.find("checks");
  if (!checks) fail("[scenario] needs a 'checks' list", s.line);
  {
    std::stringstream ss(checks->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const std::string base = check_base(item);
      if (std::find(registry.begin(), registry.end(), base) == registry.end())
        fail("unknown check id '" + item + "'", checks->line);
      sc.checks_.push_back(item);
    }
  }
  if (sc.checks_.empty()) fail("[scenario] checks is empty", checks->line);
  sc.order_checks_ = sc.checks_;
  if (const IniEntry* e = sc.settings("convergence").find("checks")) {
    sc.order_checks_.clear();
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (std::find(sc.checks_.begin(), sc.checks_.end(), item) == sc.checks_.end())
        fail("[convergence] check '" + item + "' is not in [scenario] checks", e->line);
      sc.order_checks_.push_back(item);
    }
  }
  sc.name_ = s.text("name", "unnamed");
  if (const IniEntry* e = s.find("seed")) {
    try {
      sc.seed_ = std::stoull(e->value);
    } catch (const std::exception&) {
      fail("seed must be a non-negative integer", e->line);
    }
  }

  const IniSection& g = sc.settings("geometry");
  GeometryConfig& geo = sc.geometry_;
  geo.dimension = g.integer("dimension", 2);
  if (geo.dimension < 1 || geo.dimension > Domain::kMaxDimension)
    fail("[geometry] dimension must be between 1 and 4", g.find("dimension") ? g.find("dimension")->line : g.line);
  const std::string base = g.text("base", "torus");
  if (base != "torus" && base != "box") fail("[geometry] base must be torus or box", g.find("base")->line);
  geo.periodic = base == "torus";
  geo.lower = g.numbers("lower");
  geo.upper = g.numbers("upper");
  if (geo.lower.empty()) geo.lower.assign(geo.dimension, 0.0);
  if (geo.upper.empty()) geo.upper.assign(geo.dimension, 1.0);
  if (static_cast<int>(geo.lower.size()) != geo.dimension || static_cast<int>(geo.upper.size()) != geo.dimension)
    fail("[geometry] lower/upper need one value per dimension", g.line);
  geo.resolution = g.integer("resolution", 16);
  if (geo.resolution < 4) fail("[geometry] resolution must be at least 4", g.find("resolution") ? g.find("resolution")->line : g.line);
  std::string quad;
  for (int a = 1; a <= geo.dimension; ++a) quad += (a > 1 ? "+x" : "(x") + std::to_string(a) + "^2";
  quad += ")/2";
  geo.phi = g.text("phi", quad);
  geo.initial = g.text("initial", quad);
  geo.exact = g.text("exact", "");
  geo.c = g.number("c", 1.0);
  geo.margin = g.number("margin", 0.125);
  if (geo.margin < 0.0 || geo.margin >= 0.5) fail("[geometry] margin must be in [0, 0.5)", g.find("margin")->line);
  geo.interpolation = g.text("interpolation", "auto");
  if (geo.interpolation != "auto" && geo.interpolation != "spectral" && geo.interpolation != "cubic")
    fail("[geometry] interpolation must be auto, spectral or cubic", g.find("interpolation")->line);
  for (const char* k : {"phi", "initial", "exact"}) require_expression(g, k);

  const IniSection& c = sc.settings("cycle");
  CycleConfig& cyc = sc.cycle_;
  cyc.f = c.text("f", "0");
  cyc.initial = c.text("initial", "0");
  cyc.theta = c.number("theta", 0.0);
  cyc.connection = c.text("connection", "zero");
  if (cyc.connection != "zero" && cyc.connection != "random" && cyc.connection != "potential")
    fail("[cycle] connection must be zero, random or potential", c.find("connection")->line);
  cyc.rank = c.integer("rank", 1);
  if (cyc.rank < 1) fail("[cycle] rank must be positive", c.find("rank")->line);
  cyc.e = c.text("e", "0");
  cyc.max_mode = c.integer("max_mode", 1);
  cyc.amplitude = c.number("amplitude", 0.5);
  for (const char* k : {"f", "initial", "e"}) require_expression(c, k);

  for (const auto& sec : sc.sections_) {
    const std::string b = check_base(sec.name);
    if (b == "harmonic") require_expression(sec, "exact");
    if (b == "case2")
      for (const char* k : {"f", "g", "h"}) require_expression(sec, k);
    if (b == "cotangent") require_expression(sec, "phi_l");
    if (b == "cover")
      for (const auto& item : sec.list("sections")) try {
          parse_expression(item);
        } catch (const SyntaxError& err) {
          fail("[" + sec.name + "] sections: " + err.what(), sec.find("sections")->line);
        }
    if (b == "case1")
      for (const auto& [k, e] : sec.entries) {
        if (k == "expect") continue;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) try {
            parse_rational(item);
          } catch (const Error& err) {
            fail("[" + sec.name + "] " + k + ": " + err.what(), e.line);
          }
      }
  }
  return sc;
}

const IniSection& Scenario::settings(const std::string& id) const {
  for (const auto& s : sections_)
    if (s.name == id) return s;
  if (const std::string base = check_base(id); base != id) return settings(base);
  return empty_;
}

double Scenario::tolerance(const std::string& id) const {
  if (tolerance_override_) return *tolerance_override_;
  const std::string base = check_base(id);
  const IniSection& t = settings("tolerances");
  return t.has(id) ? t.number(id, 0.0) : t.number(base, default_tolerance(base));
}

double Scenario::solver_tolerance() const { return settings("tolerances").number("solver", 1e-10); }

Grid Scenario::grid() const {
  const auto& g = geometry_;
  if (g.periodic) {
    std::vector<double> period(g.dimension);
    for (int a = 0; a < g.dimension; ++a) period[a] = g.upper[a] - g.lower[a];
    return Grid(Domain::torus(g.lower, period), g.resolution);
  }
  return Grid(Domain::box(g.lower, g.upper), g.resolution);
}

}  // namespace mirrorforge::cli
