#pragma once

#include <memory>
#include <optional>
#include <string>

#include <mirrorforge/serialize.hpp>

#include "scenario.hpp"

namespace mirrorforge::cli {

struct CheckResult {
  std::string id;
  std::string status = "fail";  // pass | fail | error
  // Value compared against the tolerance.
  std::optional<double> residual;
  // Quantity tracked by convergence studies when it differs from residual.
  std::optional<double> refinement;
  std::string refinement_name;
  bool exact = false;  // residual computed in exact arithmetic
  double tolerance = 0.0;
  Json metrics = Json::object();
  std::string message;
  double seconds = 0.0;

  bool passed() const { return status == "pass"; }
};

// Objects shared between the checks of one scenario run, built on first use.
class Context {
 public:
  explicit Context(const Scenario& scenario);

  const Scenario& scenario() const noexcept { return scenario_; }
  const Grid& grid() const noexcept { return grid_; }

  const KahlerPotential& initial_potential();
  std::shared_ptr<const SemiFlatGeometry> geometry();
  // Set when the geometry was solved for.
  const MongeAmpereResult* ma_result();

  const SectionCycle& cycle();
  const SlagResult* slag_result();
  const ConnectionOnC& connection();
  DualOptions dual_options() const;
  std::shared_ptr<const DualGeometry> dual();
  const MirrorConnection& mirror();

 private:
  const Scenario& scenario_;
  Grid grid_;
  std::optional<KahlerPotential> initial_;
  std::optional<MongeAmpereResult> ma_;
  std::shared_ptr<const SemiFlatGeometry> geometry_;
  std::optional<SlagResult> slag_;
  std::optional<SectionCycle> cycle_;
  std::optional<ConnectionOnC> connection_;
  std::shared_ptr<const DualGeometry> dual_;
  std::optional<MirrorConnection> mirror_;
};

// Runs one check; library errors are reported as status "error".
CheckResult run_check(const std::string& id, Context& context);

// Max |field| over nodes at boundary depth >= min_depth (all nodes on a torus).
double interior_max(const ScalarField& field, int min_depth = 1);

}  // namespace mirrorforge::cli
