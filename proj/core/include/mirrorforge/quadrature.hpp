#pragma once

#include "mirrorforge/field.hpp"

namespace mirrorforge {

// Rectangle rule on periodic axes, trapezoid rule on box axes; deterministic pairwise sum.
Complex integrate(const ScalarField& field);
Complex integrate(const Grid& grid, std::span<const Complex> values);

// Quadrature weight of a node (product of per-axis weights).
double quadrature_weight(const Grid& grid, std::size_t node);

}  // namespace mirrorforge
