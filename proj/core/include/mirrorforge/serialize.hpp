#pragma once

#include <nlohmann/json.hpp>

#include "mirrorforge/functionals.hpp"
#include "mirrorforge/special_cases.hpp"

namespace mirrorforge {

using Json = nlohmann::ordered_json;

// Doubles that are not finite become null.
Json number(double v);
Json complex_number(Complex z);

Json to_json(const Grid& grid);
Grid grid_from_json(const Json& j);

// Values as {"re": [...], "im": [...]}; "im" is omitted when the field is real.
Json to_json(const ScalarField& field);
ScalarField field_from_json(const Json& j, const Grid& grid);

Json to_json(const SolverDiagnostics& d);

// Expression text when known, otherwise the lift and the sampled remainder.
Json to_json(const KahlerPotential& potential, const SolverDiagnostics* diagnostics = nullptr);
KahlerPotential potential_from_json(const Json& j);

Json to_json(const SectionCycle& cycle);

// Components as {"axes": [...], "re": [...], "im": [...]} in the real frame, plus theta and
// the potential the dual was built from.
Json to_json(const MirrorConnection& mc);

Json to_json(const CSReport& report);
Json to_json(const Case1Report& report);
Json to_json(const Case1Transform& transform);
Json to_json(const CotangentReport& report);

}  // namespace mirrorforge
