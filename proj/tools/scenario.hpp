#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <mirrorforge/grid.hpp>

namespace mirrorforge::cli {

struct IniEntry {
  std::string value;
  int line = 0;
};

// One [section] of key = value lines, in file order.
struct IniSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, IniEntry>> entries;

  const IniEntry* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string text(const std::string& key, const std::string& fallback) const;
  // Numbers accept constant expressions such as "pi/6".
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  // Items separated by ';'.
  std::vector<std::string> list(const std::string& key) const;
};

// '#' starts a comment; values may be wrapped in double quotes.
std::vector<IniSection> parse_ini(const std::string& text);

struct GeometryConfig {
  int dimension = 2;
  bool periodic = true;
  std::vector<double> lower, upper;
  int resolution = 16;
  std::string phi;         // expression, or "solve"
  std::string initial;     // starting potential when phi = solve
  std::string exact;       // optional exact solution for the refinement error
  double c = 1.0;
  std::string interpolation = "auto";
  // Box bases: mirror-side residuals skip nodes closer than margin * resolution to a face.
  double margin = 0.125;
};

struct CycleConfig {
  std::string f = "0";
  std::string initial;  // starting f when f = solve
  double theta = 0.0;
  std::string connection = "zero";  // zero | random | potential
  int rank = 1;
  std::string e;  // connection potential when connection = potential
  int max_mode = 1;
  double amplitude = 0.5;
};

class Scenario {
 public:
  static Scenario load(const std::string& path);
  static Scenario parse(const std::string& text, const std::string& origin = "<string>");

  const std::string& name() const noexcept { return name_; }
  const std::string& origin() const noexcept { return origin_; }
  const std::vector<std::string>& checks() const noexcept { return checks_; }
  // Checks whose observed order is held to [convergence] expected_order.
  const std::vector<std::string>& order_checks() const noexcept { return order_checks_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const GeometryConfig& geometry() const noexcept { return geometry_; }
  const CycleConfig& cycle() const noexcept { return cycle_; }
  const std::vector<IniSection>& sections() const noexcept { return sections_; }

  // Settings section of a check id "base" or "base:label"; an empty section when absent.
  const IniSection& settings(const std::string& check_id) const;
  // [tolerances] value for the base id, the --tolerance override, or the default.
  double tolerance(const std::string& check_id) const;
  double solver_tolerance() const;

  void override_resolution(int n) { geometry_.resolution = n; }
  void override_seed(std::uint64_t seed) { seed_ = seed; }
  void override_tolerance(double t) { tolerance_override_ = t; }

  Grid grid() const;

 private:
  std::string name_, origin_;
  std::vector<std::string> checks_, order_checks_;
  std::uint64_t seed_ = 1;
  GeometryConfig geometry_;
  CycleConfig cycle_;
  std::vector<IniSection> sections_;
  std::optional<double> tolerance_override_;
  IniSection empty_;
};

// Registry of check identifiers (the part before ':').
const std::vector<std::string>& check_registry();
std::string check_base(const std::string& check_id);
double default_tolerance(const std::string& base);

}  // namespace mirrorforge::cli
