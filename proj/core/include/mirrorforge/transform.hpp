#pragma once

#include <memory>
#include <utility>

#include "mirrorforge/acycle.hpp"
#include "mirrorforge/dual.hpp"

namespace mirrorforge {

// Connection d + A on the mirror W. A lives on the dual grid with space dimension 2m:
// axes 0..m-1 are x~ (sampled) and m..2m-1 are y~ (invariant).
class MirrorConnection {
 public:
  MirrorConnection(std::shared_ptr<const DualGeometry> dual, DifferentialForm A, double theta);

  const DualGeometry& dual() const noexcept { return *dual_; }
  std::shared_ptr<const DualGeometry> dual_ptr() const noexcept { return dual_; }
  const DifferentialForm& form() const noexcept { return A_; }
  double theta() const noexcept { return theta_; }
  int rank() const noexcept { return A_.rank(); }
  int dimension() const noexcept { return dual_->dimension(); }

  // A_0 = i sum y^j dy~_j: the part of A along the fibres.
  DifferentialForm background() const;
  // y^j o x read back from the dy~_j coefficients (scalar part, divided by i).
  ScalarField section(int j) const;
  // F = dA + A ^ A
  DifferentialForm curvature() const;

 private:
  std::shared_ptr<const DualGeometry> dual_;
  DifferentialForm A_;
  double theta_;
};

// A = i sum y^j(x(x~)) dy~_j + i sum (E_k phi^{kj})(x(x~)) dx~_j. The dual must be built
// from the cycle's geometry. On a torus f must be linear plus periodic.
MirrorConnection fm_transform(const SectionCycle& cycle, const ConnectionOnC& connection,
                              std::shared_ptr<const DualGeometry> dual);
MirrorConnection fm_transform(const SectionCycle& cycle, const ConnectionOnC& connection,
                              const DualOptions& options = {});

// max |F^{0,2}| in the dz~ frame, over dual nodes at boundary depth >= min_depth.
double f02_residual(const MirrorConnection& mc, int min_depth = 0);

// Coefficient of Im[e^{-i theta} (omega~ + F)^m] against dx~_1..dx~_m ^ dy~_1..dy~_m
// (symmetrized and traced when rank > 1).
ScalarField dhym_residual(const MirrorConnection& mc);

// dhym_residual / (det(g)^{-2} slag_residual) at corresponding points: m! (-1)^{m(m-1)/2}.
double kappa_dhym(int m);

enum class FormTransform { Phi, Psi };

// Phi(dx^j) = -1/2 phi^{jk} dz~-bar_k and Psi(dx^j) = 1/2 phi^{jk} dz~-bar_k (coefficients
// composed with x(x~)), extended to q-forms by wedge products of the images.
DifferentialForm transform_form(const DifferentialForm& B, FormTransform mode, const DualGeometry& dual);

// (max |dbar_A B|, max |Im e^{-i theta} (omega~ + F)^{m-q} ^ d_A^{1,q} B|) for a (0,q)-form B,
// over dual nodes at boundary depth >= min_depth.
std::pair<double, double> deformed_harmonic_residual(const DifferentialForm& B, const MirrorConnection& mc,
                                                     int min_depth = 0);

}  // namespace mirrorforge
