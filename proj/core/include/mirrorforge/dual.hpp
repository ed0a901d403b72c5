#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mirrorforge/interpolation.hpp"
#include "mirrorforge/semiflat.hpp"

namespace mirrorforge {

struct DualOptions {
  // Empty means automatic: spectral on periodic grids up to 8192 nodes, cubic otherwise.
  std::optional<InterpolationMethod> interpolation;
  double newton_tolerance = 1e-13;
  int newton_steps = 60;
};

InterpolationMethod default_interpolation(const Grid& grid);

// Dual coordinates x~ = grad phi on the base and the mirror geometry on W. The dual
// grid has the base resolution. On a torus the quadratic part Q of phi must be diagonal
// and the dual torus is the image Q * base + b with periods q_i L_i; on a box the dual
// box is the largest coordinate box inside the image of the faces.
class DualGeometry {
 public:
  static DualGeometry build(const SemiFlatGeometry& geometry, const DualOptions& options = {});

  const SemiFlatGeometry& base() const noexcept { return *base_; }
  const Grid& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return grid_.dimension(); }
  InterpolationMethod interpolation() const noexcept { return method_; }

  // x~_j(x) sampled on the base grid.
  const ScalarField& forward(int j) const { return forward_[j]; }
  // x^j(x~) sampled on the dual grid (unwrapped coordinates).
  const ScalarField& preimage(int j) const { return preimage_[j]; }
  // x~_j at an arbitrary base point, from the same interpolants used by the inverse map.
  // jacobian (m*m, row-major dx~_j/dx^k) is filled when non-empty.
  void forward_at(std::span<const double> x, std::span<double> xt, std::span<double> jacobian = {}) const;

  // Base field composed with x(x~).
  ScalarField compose(const ScalarField& base_field) const;
  ScalarField compose(const LiftedField& base_field) const;
  MatrixField compose(const MatrixField& base_field) const;

  // phi^{ij} o x and phi_ij o x on the dual grid.
  const ScalarField& inverse_hessian(int i, int j) const { return inv_[i * dimension() + j]; }
  const ScalarField& hessian(int i, int j) const { return hess_[i * dimension() + j]; }
  const std::vector<ScalarField>& inverse_hessian_fields() const noexcept { return inv_; }

  // g~ = diag(phi^{-1}, phi^{-1}) o x in (x~, y~) coordinates.
  std::vector<ScalarField> metric() const;
  // omega~ = (i/2) sum phi^{ij} dz~_i ^ dz~-bar_j, space dimension 2m (y~ axes invariant).
  DifferentialForm kahler_form() const;
  DifferentialForm holomorphic_volume() const;
  ComplexStructure complex_structure() const { return ComplexStructure::standard(dimension()); }

  // Legendre dual potential Phi(x~) = x~ . x - phi(x), target constant 1/c.
  KahlerPotential dual_potential() const;

  // max |x~(x(x~)) - x~| over dual nodes.
  double round_trip_error() const;
  int max_newton_steps() const noexcept { return newton_steps_; }

 private:
  DualGeometry() = default;

  std::shared_ptr<const SemiFlatGeometry> base_;
  Grid grid_{Domain::torus(1), 4};
  InterpolationMethod method_ = InterpolationMethod::Cubic;
  PolynomialLift lift_;
  std::vector<ScalarField> forward_;
  std::vector<ScalarField> preimage_;
  std::vector<ScalarField> hess_, inv_;
  std::vector<std::shared_ptr<const Interpolant>> gradient_remainder_;
  int newton_steps_ = 0;
};

double calabi_identity_residual(const DualGeometry& dual);

struct InvolutionReport {
  double round_trip = 0.0;      // max |x~(x(x~)) - x~| of the first transform
  double hessian_error = 0.0;   // max |phi_ij of the dual of the dual - phi_ij|
  double potential_error = 0.0; // max |values of the dual of the dual - phi|
};

// Builds the dual of the dual potential and compares it with the original.
InvolutionReport dual_of_dual(const SemiFlatGeometry& geometry, const DualOptions& options = {});

}  // namespace mirrorforge
