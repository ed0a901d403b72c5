#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "mirrorforge/semiflat.hpp"

namespace mirrorforge {

// Lagrangian section y^j = phi^{jk} d_k f of M over the base, with phase theta.
class SectionCycle {
 public:
  SectionCycle(std::shared_ptr<const SemiFlatGeometry> geometry, LiftedField f, double theta);

  const SemiFlatGeometry& geometry() const noexcept { return *geometry_; }
  std::shared_ptr<const SemiFlatGeometry> geometry_ptr() const noexcept { return geometry_; }
  const LiftedField& potential() const noexcept { return f_; }
  double theta() const noexcept { return theta_; }
  int dimension() const noexcept { return f_.dimension(); }

  // d_k f and y^j on the base grid.
  const ScalarField& gradient(int k) const { return grad_[k]; }
  const ScalarField& section(int j) const { return y_[j]; }

 private:
  std::shared_ptr<const SemiFlatGeometry> geometry_;
  LiftedField f_;
  double theta_;
  std::vector<ScalarField> grad_, y_;
};

// Hess(f)_lk = f_lk - Gamma^q_lk f_q, m*m row-major fields.
std::vector<ScalarField> covariant_hessian(const LiftedField& f, const SemiFlatGeometry& geometry);

// Im[e^{-i theta} det(g + i Hess f)] at every node.
ScalarField slag_residual(const SectionCycle& cycle);

// max |S_ik - S_ki| with S_ik = d_k (phi_ij y^j): closedness of the graph's Liouville form.
double lagrangian_residual(const SectionCycle& cycle);

struct SlagResult {
  SectionCycle cycle;
  SolverDiagnostics diagnostics;
  // Periodic grids: constant c with slag_residual = c solved for (zero when the phase is attainable).
  double phase_defect = 0.0;
};

// Newton on f. Box: Dirichlet data from the initial f. Periodic: the equation is augmented
// with a constant (reported as phase_defect) and the mean of f is fixed to 0 afterwards.
// Throws ConvexityError when Re[e^{-i theta} det(g + i Hess f)] <= 0 (lost ellipticity).
SlagResult solve_slag_section(std::shared_ptr<const SemiFlatGeometry> geometry, double theta,
                              const LiftedField& initial, double tolerance, SolverOptions options = {});

// Unitary connection d + a on C with a = i sum_k E_k dx^k, E_k Hermitian r x r fields.
class ConnectionOnC {
 public:
  ConnectionOnC(std::vector<MatrixField> E);

  // r = 1, E_k = d_k e.
  static ConnectionOnC from_potential(const LiftedField& e);
  // Hermitian low-frequency Fourier fields with seeded coefficients; not flat in general.
  static ConnectionOnC random(const Grid& grid, int rank, std::uint64_t seed, int max_mode = 1,
                              double amplitude = 0.5);
  static ConnectionOnC zero(const Grid& grid, int rank);

  const Grid& grid() const noexcept { return E_.front().grid(); }
  int rank() const noexcept { return E_.front().rank(); }
  int dimension() const noexcept { return static_cast<int>(E_.size()); }
  const MatrixField& E(int k) const { return E_[k]; }

  // a as a matrix-valued one-form on the base (space dimension m).
  DifferentialForm form() const;
  double hermiticity_defect() const;

 private:
  std::vector<MatrixField> E_;
};

using FlatConnectionOnC = ConnectionOnC;

// Curvature da + a ^ a.
DifferentialForm connection_curvature(const ConnectionOnC& connection);
double flatness_residual(const ConnectionOnC& connection);

// Pullback of g to the graph: G = phi + (dy)^T phi (dy), m*m fields.
std::vector<ScalarField> induced_metric(const SectionCycle& cycle);

// Covariant exterior derivative of an adjoint-valued form: dB + a ^ B - (-1)^q B ^ a.
DifferentialForm covariant_derivative(const DifferentialForm& B, const ConnectionOnC* connection);

// (max |d_a B|, max |d_a * B|) with * the Hodge star of the induced metric.
std::pair<double, double> harmonic_residual(const DifferentialForm& B, const SectionCycle& cycle,
                                            const ConnectionOnC* connection = nullptr);

}  // namespace mirrorforge
