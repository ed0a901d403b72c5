#pragma once

#include <vector>

#include "mirrorforge/field.hpp"

namespace mirrorforge {

// Trigonometric interpolant of a field on a periodic grid (FFTW). Even resolutions
// split the Nyquist mode as a cosine so real data stays real off-grid.
class SpectralField {
 public:
  explicit SpectralField(const ScalarField& field);

  const Grid& grid() const noexcept { return grid_; }
  Complex value(std::span<const double> x) const;
  Complex value_and_gradient(std::span<const double> x, std::span<Complex> gradient) const;
  // Exact derivative of the interpolant sampled back on the grid; orders[a] per axis.
  ScalarField derivative(std::span<const int> orders) const;

 private:
  void phases(int axis, double x, std::vector<Complex>& w, std::vector<Complex>* dw) const;

  Grid grid_;
  std::vector<Complex> coeff_;
};

ScalarField spectral_derivative(const ScalarField& field, int axis, int order);

}  // namespace mirrorforge
