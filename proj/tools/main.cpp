#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <mirrorforge/error.hpp>

#include "report.hpp"

using namespace mirrorforge;
using namespace mirrorforge::cli;

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::vector<int> parse_resolutions(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size() || n < 4) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw ConfigError("bad resolution '" + item + "'");
    }
  }
  return out;
}

void print_summary(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    std::cerr << (r.status == "pass" ? "PASS " : r.status == "fail" ? "FAIL " : "ERROR") << ' ' << r.id;
    if (r.residual) std::cerr << "  residual=" << *r.residual;
    std::cerr << "  tol=" << r.tolerance;
    if (!r.message.empty()) std::cerr << "  (" << r.message << ")";
    std::cerr << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-flat mirror verification tool"};
  app.require_subcommand(1);

  std::string scenario_path, output, resolutions_text, report_path;
  std::optional<int> resolution;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  bool timing = false;

  auto* verify = app.add_subcommand("verify", "run the checks of a scenario and write a JSON report");
  verify->add_option("--scenario", scenario_path, "scenario file")->required();
  verify->add_option("--resolution", resolution, "override [geometry] resolution");
  verify->add_option("--tolerance", tolerance, "override every check tolerance");
  verify->add_option("--output", output, "report path (stdout when omitted)");
  verify->add_option("--seed", seed, "override [scenario] seed");
  verify->add_flag("--timing", timing, "include wall times in the report");

  auto* converge = app.add_subcommand("converge", "refinement study over several resolutions");
  converge->add_option("--scenario", scenario_path, "scenario file")->required();
  converge->add_option("--resolutions", resolutions_text, "comma separated, at least three")->required();
  converge->add_option("--output", output, "CSV path (stdout when omitted)");
  converge->add_option("--report", report_path, "JSON report path");
  converge->add_option("--seed", seed, "override [scenario] seed");
  converge->add_flag("--timing", timing, "include wall times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Scenario sc = Scenario::load(scenario_path);
    if (seed) sc.override_seed(*seed);
    if (verify->parsed()) {
      if (resolution) sc.override_resolution(*resolution);
      if (tolerance) sc.override_tolerance(*tolerance);
      const RunOutcome run = run_scenario(sc, timing);
      print_summary(run.results);
      if (output.empty())
        std::cout << dump(run.report);
      else
        write_file(output, dump(run.report));
      return run.exit_code;
    }
    const ConvergenceOutcome conv = convergence_study(sc, parse_resolutions(resolutions_text), timing);
    if (output.empty())
      std::cout << conv.csv;
    else
      write_file(output, conv.csv);
    if (!report_path.empty()) write_file(report_path, dump(conv.report));
    return conv.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
