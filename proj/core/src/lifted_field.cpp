#include "mirrorforge/lifted_field.hpp"

#include <array>
#include <cmath>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"

namespace mirrorforge {

PolynomialLift PolynomialLift::zero(int dimension) {
  PolynomialLift p;
  p.linear.assign(dimension, 0.0);
  p.quadratic.assign(static_cast<std::size_t>(dimension) * dimension, 0.0);
  return p;
}

double PolynomialLift::value(std::span<const double> x) const {
  const int m = dimension();
  double v = constant;
  for (int a = 0; a < m; ++a) {
    v += linear[a] * x[a];
    for (int b = 0; b < m; ++b) v += 0.5 * x[a] * quadratic[a * m + b] * x[b];
  }
  return v;
}

double PolynomialLift::derivative(std::span<const double> x, int axis) const {
  const int m = dimension();
  double v = linear[axis];
  for (int b = 0; b < m; ++b) v += quadratic[axis * m + b] * x[b];
  return v;
}

bool PolynomialLift::is_zero() const {
  if (constant != 0.0) return false;
  for (double v : linear)
    if (v != 0.0) return false;
  for (double v : quadratic)
    if (v != 0.0) return false;
  return true;
}

LiftedField::LiftedField(PolynomialLift lift, ScalarField remainder)
    : lift_(std::move(lift)), remainder_(std::move(remainder)) {
  if (lift_.dimension() != remainder_.grid().dimension())
    throw InvalidArgument("lift dimension does not match grid");
}

LiftedField LiftedField::sampled(ScalarField values) {
  const int m = values.grid().dimension();
  return LiftedField(PolynomialLift::zero(m), std::move(values));
}

LiftedField LiftedField::from_expression(const Expression& expr, const Grid& grid) {
  const int m = grid.dimension();
  if (!grid.periodic()) return sampled(sample(expr, grid));

  const Domain& dom = grid.domain();
  std::array<double, Variable::kSlotCount> slots;
  slots.fill(std::nan(""));
  auto eval = [&](std::span<const double> x) {
    for (int a = 0; a < m; ++a) slots[Variable{Variable::Family::X, a + 1}.slot()] = x[a];
    return expr.evaluate(slots);
  };
  std::vector<double> x0(m), x(m);
  for (int a = 0; a < m; ++a) x0[a] = dom.lower(a);
  auto lattice = [&](int i, int ki, int j, int kj) {
    x = x0;
    if (i >= 0) x[i] += ki * dom.extent(i);
    if (j >= 0) x[j] += kj * dom.extent(j);
    return eval(x);
  };

  PolynomialLift lift = PolynomialLift::zero(m);
  const double f0 = lattice(-1, 0, -1, 0);
  std::vector<double> f1(m);
  for (int i = 0; i < m; ++i) f1[i] = lattice(i, 1, -1, 0);
  for (int i = 0; i < m; ++i) {
    const double Li = dom.extent(i);
    lift.quadratic[i * m + i] = (lattice(i, 2, -1, 0) - 2.0 * f1[i] + f0) / (Li * Li);
    for (int j = i + 1; j < m; ++j) {
      const double q = (lattice(i, 1, j, 1) - f1[i] - f1[j] + f0) / (Li * dom.extent(j));
      lift.quadratic[i * m + j] = lift.quadratic[j * m + i] = q;
    }
  }
  for (int i = 0; i < m; ++i) {
    const double Li = dom.extent(i);
    double qx0 = 0.0;
    for (int b = 0; b < m; ++b) qx0 += lift.quadratic[i * m + b] * x0[b];
    lift.linear[i] = (f1[i] - f0) / Li - qx0 - 0.5 * lift.quadratic[i * m + i] * Li;
  }
  // Round values that are integers (or simple dyadics) up to roundoff, so exact inputs
  // such as (x1^2 + x2^2)/2 give an exact lift.
  auto snap = [](double& v) {
    const double r = std::round(v * 1024.0) / 1024.0;
    if (std::abs(v - r) < 1e-11 * std::max(1.0, std::abs(v))) v = r;
  };
  for (double& v : lift.quadratic) snap(v);
  for (double& v : lift.linear) snap(v);

  ScalarField values = sample(expr, grid);
  ScalarField rem(grid, expr.text());
  std::vector<double> node_x(m);
  double scale = 1.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    grid.coordinates(n, node_x);
    rem[n] = values[n] - lift.value(node_x);
    scale = std::max(scale, std::abs(values[n]));
  }
  // periodicity check of the remainder at shifted nodes
  const std::size_t probe_stride = std::max<std::size_t>(1, grid.node_count() / 16);
  for (std::size_t n = 0; n < grid.node_count(); n += probe_stride) {
    grid.coordinates(n, node_x);
    for (int a = 0; a < m; ++a) {
      x = node_x;
      x[a] += dom.extent(a);
      const double shifted = eval(x) - lift.value(x);
      if (std::abs(shifted - rem[n].real()) > 1e-9 * scale)
        throw InvalidArgument("expression '" + expr.text() +
                              "' is not quadratic plus periodic on the torus (axis " + std::to_string(a) + ")");
    }
  }
  return LiftedField(std::move(lift), std::move(rem));
}

ScalarField LiftedField::values() const {
  ScalarField out = remainder_;
  std::vector<double> x(dimension());
  for (std::size_t n = 0; n < grid().node_count(); ++n) {
    grid().coordinates(n, x);
    out[n] += lift_.value(x);
  }
  return out;
}

ScalarField LiftedField::gradient(int axis) const {
  ScalarField out = partial_derivative(remainder_, axis, 1);
  std::vector<double> x(dimension());
  for (std::size_t n = 0; n < grid().node_count(); ++n) {
    grid().coordinates(n, x);
    out[n] += lift_.derivative(x, axis);
  }
  return out;
}

ScalarField LiftedField::hessian(int a, int b) const {
  ScalarField out = hessian_entry(remainder_, a, b);
  out += Complex(lift_.hessian(a, b));
  return out;
}

Complex LiftedField::value_at(std::span<const double> x, const Interpolant& remainder_interpolant) const {
  return lift_.value(x) + remainder_interpolant.value(x);
}

}  // namespace mirrorforge
