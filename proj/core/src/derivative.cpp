#include "mirrorforge/derivative.hpp"

#include <algorithm>

#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"

namespace mirrorforge {

namespace {

void check_axis(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.dimension()) throw InvalidArgument("derivative axis out of range");
}

void check_width(const Grid& grid, int axis, int width) {
  if (grid.count(axis) < width)
    throw InvalidArgument("grid resolution smaller than the stencil width on axis " + std::to_string(axis));
}

}  // namespace

Stencil first_derivative_stencil(const Grid& grid, std::size_t node, int axis) {
  check_axis(grid, axis);
  check_width(grid, axis, 3);
  const double h = grid.spacing(axis);
  const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(grid.stride(axis));
  Stencil st;
  if (grid.periodic()) {
    st.add(grid.shift(node, axis, 1), 0.5 / h);
    st.add(grid.shift(node, axis, -1), -0.5 / h);
    return st;
  }
  const int k = grid.index(node, axis);
  const int last = grid.count(axis) - 1;
  if (k == 0) {
    st.add(node, -1.5 / h);
    st.add(node + s, 2.0 / h);
    st.add(node + 2 * s, -0.5 / h);
  } else if (k == last) {
    st.add(node, 1.5 / h);
    st.add(node - s, -2.0 / h);
    st.add(node - 2 * s, 0.5 / h);
  } else {
    st.add(node + s, 0.5 / h);
    st.add(node - s, -0.5 / h);
  }
  return st;
}

Stencil second_derivative_stencil(const Grid& grid, std::size_t node, int axis) {
  check_axis(grid, axis);
  const double h2 = grid.spacing(axis) * grid.spacing(axis);
  const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(grid.stride(axis));
  Stencil st;
  if (grid.periodic()) {
    check_width(grid, axis, 3);
    st.add(grid.shift(node, axis, 1), 1.0 / h2);
    st.add(node, -2.0 / h2);
    st.add(grid.shift(node, axis, -1), 1.0 / h2);
    return st;
  }
  check_width(grid, axis, 4);
  const int k = grid.index(node, axis);
  const int last = grid.count(axis) - 1;
  if (k == 0 || k == last) {
    const std::ptrdiff_t dir = (k == 0) ? s : -s;
    st.add(node, 2.0 / h2);
    st.add(node + dir, -5.0 / h2);
    st.add(node + 2 * dir, 4.0 / h2);
    st.add(node + 3 * dir, -1.0 / h2);
  } else {
    st.add(node + s, 1.0 / h2);
    st.add(node, -2.0 / h2);
    st.add(node - s, 1.0 / h2);
  }
  return st;
}

Stencil hessian_stencil(const Grid& grid, std::size_t node, int a, int b) {
  if (a == b) return second_derivative_stencil(grid, node, a);
  if (a > b) std::swap(a, b);
  // D_a applied to D_b f
  Stencil out;
  const Stencil outer = first_derivative_stencil(grid, node, a);
  for (const auto& t : outer) {
    const Stencil inner = first_derivative_stencil(grid, t.node, b);
    for (const auto& u : inner) out.add(u.node, t.weight * u.weight);
  }
  return out;
}

void partial_derivative(const Grid& grid, std::span<const Complex> in, std::span<Complex> out, int axis,
                        int order) {
  if (order != 1 && order != 2) throw InvalidArgument("derivative order must be 1 or 2");
  check_axis(grid, axis);
  if (order == 1) check_width(grid, axis, 3);
  else check_width(grid, axis, grid.periodic() ? 3 : 4);
  parallel_for(grid.node_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      const Stencil st = order == 1 ? first_derivative_stencil(grid, n, axis) : second_derivative_stencil(grid, n, axis);
      out[n] = st.apply(in.data());
    }
  });
}

ScalarField partial_derivative(const ScalarField& field, int axis, int order) {
  ScalarField out(field.grid());
  partial_derivative(field.grid(), field.values(), out.values(), axis, order);
  return out;
}

ScalarField hessian_entry(const ScalarField& field, int a, int b) {
  if (a == b) return partial_derivative(field, a, 2);
  if (a > b) std::swap(a, b);
  return partial_derivative(partial_derivative(field, b, 1), a, 1);
}

}  // namespace mirrorforge
