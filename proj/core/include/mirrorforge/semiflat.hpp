#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorforge/expression.hpp"
#include "mirrorforge/forms.hpp"
#include "mirrorforge/lifted_field.hpp"
#include "mirrorforge/solver.hpp"

namespace mirrorforge {

// Convex potential phi on the base and the target constant c of det(phi_ij) = c.
struct KahlerPotential {
  LiftedField phi;
  double c = 1.0;
  std::string source;  // expression text, empty when only samples are known

  static KahlerPotential from_expression(const Expression& expr, const Grid& grid, double c = 1.0);
  const Grid& grid() const noexcept { return phi.grid(); }
  int dimension() const noexcept { return phi.dimension(); }
};

// Hessian entries phi_ab (compact pure, nested mixed differences plus the lift).
std::vector<ScalarField> potential_hessian(const LiftedField& phi);
ScalarField hessian_determinant(const LiftedField& phi);

// det(phi_ij) - c at every node.
ScalarField ma_residual(const KahlerPotential& potential);

struct MongeAmpereResult {
  KahlerPotential potential;
  SolverDiagnostics diagnostics;
  double requested_c = 1.0;
  // Periodic grids: the discrete compatible constant actually solved for.
  double compatible_c = 1.0;
};

// Damped Newton on the remainder. Periodic: c is augmented to the compatible constant
// and mean(remainder) is held fixed. Box: Dirichlet data from the initial potential.
MongeAmpereResult solve_monge_ampere(const KahlerPotential& initial, double c, double tolerance,
                                     SolverOptions options = {});

// max |det(Q + spectral Hessian of the remainder) - c|, periodic grids only.
double spectral_ma_defect(const KahlerPotential& potential);
// max |det(D^2_h phi) - det(spectral Hessian of phi)|: consistency error of the discrete
// operator for a trigonometric remainder, periodic grids only.
double ma_truncation_error(const LiftedField& phi);

// Metric data derived from a potential. Fibre axes of M are invariant axes in forms.
class SemiFlatGeometry {
 public:
  explicit SemiFlatGeometry(KahlerPotential potential);

  const KahlerPotential& potential() const noexcept { return potential_; }
  const Grid& grid() const noexcept { return potential_.grid(); }
  int dimension() const noexcept { return potential_.dimension(); }

  const ScalarField& hessian(int i, int j) const { return hess_[i * dimension() + j]; }
  const ScalarField& inverse_hessian(int i, int j) const { return inv_[i * dimension() + j]; }
  // phi_ijk = d_k phi_ij
  const ScalarField& third(int i, int j, int k) const { return third_[(i * dimension() + j) * dimension() + k]; }
  // Gamma^q_lk = phi^{pq} phi_lkp
  const ScalarField& christoffel(int q, int l, int k) const { return gamma_[(q * dimension() + l) * dimension() + k]; }
  const std::vector<ScalarField>& hessian_fields() const noexcept { return hess_; }
  const std::vector<ScalarField>& inverse_hessian_fields() const noexcept { return inv_; }
  ScalarField det_hessian() const;

  // 2m x 2m metric on M: diag(phi, phi) in (x, y) coordinates.
  std::vector<ScalarField> metric() const;
  // omega = (i/2) sum phi_ij dz^i ^ dz-bar^j on M (space dimension 2m, y axes invariant).
  DifferentialForm kahler_form() const;
  // Omega = dz^1 ^ ... ^ dz^m
  DifferentialForm holomorphic_volume() const;

  double inverse_defect() const;

 private:
  KahlerPotential potential_;
  std::vector<ScalarField> hess_, inv_, third_, gamma_;
};

// Deviation of Omega ^ Omega-bar / omega^m from its mean.
double calabi_identity_residual(const SemiFlatGeometry& geometry);

}  // namespace mirrorforge
