#pragma once

#include <vector>

#include "mirrorforge/expression.hpp"
#include "mirrorforge/field.hpp"
#include "mirrorforge/interpolation.hpp"

namespace mirrorforge {

// c + b.x + x^T Q x / 2 evaluated in absolute coordinates.
struct PolynomialLift {
  double constant = 0.0;
  std::vector<double> linear;     // m
  std::vector<double> quadratic;  // m*m, symmetric, row-major

  static PolynomialLift zero(int dimension);
  int dimension() const { return static_cast<int>(linear.size()); }
  double value(std::span<const double> x) const;
  double derivative(std::span<const double> x, int axis) const;
  double hessian(int a, int b) const { return quadratic[a * dimension() + b]; }
  bool is_zero() const;
};

// A function on the base written as polynomial lift + sampled remainder. On a torus the
// remainder is periodic (this is how potentials with non-periodic growth are carried);
// on a box the lift is usually zero and the remainder holds full values.
class LiftedField {
 public:
  LiftedField(PolynomialLift lift, ScalarField remainder);

  static LiftedField sampled(ScalarField values);
  // Torus: the quadratic and linear parts are read off from values at lattice
  // translates and the rest is checked to be periodic. Box: plain samples.
  static LiftedField from_expression(const Expression& expr, const Grid& grid);

  const Grid& grid() const noexcept { return remainder_.grid(); }
  int dimension() const noexcept { return grid().dimension(); }
  const PolynomialLift& lift() const noexcept { return lift_; }
  const ScalarField& remainder() const noexcept { return remainder_; }
  ScalarField& remainder() noexcept { return remainder_; }

  ScalarField values() const;
  ScalarField gradient(int axis) const;
  ScalarField hessian(int a, int b) const;

  // Off-grid value through an interpolant of the remainder.
  Complex value_at(std::span<const double> x, const Interpolant& remainder_interpolant) const;

 private:
  PolynomialLift lift_;
  ScalarField remainder_;
};

}  // namespace mirrorforge
