#pragma once

#include <memory>
#include <string>

#include "mirrorforge/field.hpp"
#include "mirrorforge/spectral.hpp"

namespace mirrorforge {

enum class InterpolationMethod { Spectral, Cubic };

std::string to_string(InterpolationMethod method);
InterpolationMethod interpolation_from_string(const std::string& name);

// Off-grid evaluation of a sampled field. Spectral needs a periodic grid; cubic is
// tensor-product 4-point Lagrange (shifted inward at box faces).
class Interpolant {
 public:
  Interpolant(const ScalarField& field, InterpolationMethod method);

  InterpolationMethod method() const noexcept { return method_; }
  Complex value(std::span<const double> x) const;
  Complex value_and_gradient(std::span<const double> x, std::span<Complex> gradient) const;

 private:
  Complex cubic(std::span<const double> x, std::span<Complex> gradient, bool want_gradient) const;

  InterpolationMethod method_;
  ScalarField field_;
  std::shared_ptr<const SpectralField> spectral_;
};

}  // namespace mirrorforge
