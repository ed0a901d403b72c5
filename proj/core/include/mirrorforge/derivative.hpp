#pragma once

#include <array>
#include <cstddef>

#include "mirrorforge/field.hpp"

namespace mirrorforge {

struct StencilTerm {
  std::size_t node;
  double weight;
};

// Linear combination of node values; at most 16 terms (nested 4x4).
class Stencil {
 public:
  static constexpr int kCapacity = 16;

  void add(std::size_t node, double weight) { terms_[size_++] = {node, weight}; }
  int size() const noexcept { return size_; }
  const StencilTerm* begin() const noexcept { return terms_.data(); }
  const StencilTerm* end() const noexcept { return terms_.data() + size_; }

  template <typename T>
  T apply(const T* values) const {
    T s{};
    for (int i = 0; i < size_; ++i) s += terms_[i].weight * values[terms_[i].node];
    return s;
  }

 private:
  std::array<StencilTerm, kCapacity> terms_{};
  int size_ = 0;
};

// Second-order first derivative: central inside, one-sided 3-point at box faces.
Stencil first_derivative_stencil(const Grid& grid, std::size_t node, int axis);
// Second-order pure second derivative: compact 3-point inside, one-sided 4-point at faces.
Stencil second_derivative_stencil(const Grid& grid, std::size_t node, int axis);
// d^2/dx_a dx_b: pure stencil when a == b, otherwise nested first derivatives
// (applied in a fixed order so the composition is the same for (a,b) and (b,a)).
Stencil hessian_stencil(const Grid& grid, std::size_t node, int a, int b);

ScalarField partial_derivative(const ScalarField& field, int axis, int order);
ScalarField hessian_entry(const ScalarField& field, int a, int b);

// Plain arrays, used by inner loops that do not want ScalarField temporaries.
void partial_derivative(const Grid& grid, std::span<const Complex> in, std::span<Complex> out, int axis, int order);

}  // namespace mirrorforge
