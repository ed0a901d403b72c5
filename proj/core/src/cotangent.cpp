#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/random.hpp"
#include "mirrorforge/special_cases.hpp"

namespace mirrorforge {

namespace {

const Complex kI(0.0, 1.0);

AxisMask pair_mask(int a, int b) { return (AxisMask{1} << a) | (AxisMask{1} << b); }

double max_imag_rotated(const ScalarField& top, double theta) {
  const Complex rot = std::polar(1.0, -theta);
  double r = 0.0;
  for (Complex v : top.values()) r = std::max(r, std::abs((rot * v).imag()));
  return r;
}

}  // namespace

CotangentReport cotangent_theta_check(const CotangentLiftConfig& config) {
  const int n = config.n;
  const ScalarField& phi = config.phi;
  const Grid& grid = phi.grid();
  if (n < 1 || n > 3) throw InvalidArgument("cotangent lift: n must be 1, 2 or 3");
  const bool full = grid.dimension() == 2 * n;
  if (!full && grid.dimension() != n)
    throw InvalidArgument("cotangent lift: grid must sample x (n axes) or x and y (2n axes)");
  if (!phi.is_real(1e-12 * std::max(1.0, phi.max_abs()))) throw InvalidArgument("cotangent lift: phi_L must be real");
  const int D = 2 * n;
  const ComplexStructure J = ComplexStructure::standard(n);

  std::vector<ScalarField> g = config.metric;
  if (g.empty()) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) g.push_back(ScalarField::constant(grid, j == k ? 1.0 : 0.0));
  }
  if (static_cast<int>(g.size()) != n * n) throw InvalidArgument("cotangent lift: metric needs n*n entries");
  for (std::size_t p = 0; p < grid.node_count(); ++p) {
    Eigen::MatrixXcd G(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(j, k) = g[j * n + k][p];
    if ((G - G.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff()))
      throw InvalidArgument("cotangent lift: metric is not Hermitian");
    if (Eigen::LLT<Eigen::MatrixXcd>(G).info() != Eigen::Success)
      throw InvalidArgument("cotangent lift: metric is not positive definite");
  }

  // pi^* omega = i sum g_{j k-bar} dz^j ^ dz-bar^k
  DifferentialForm omega(grid, D, 2, 1, Frame::Holomorphic, J);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) omega.set_component(pair_mask(j, n + k), kI * g[j * n + k]);

  // w_j = d phi / dz^j = (phi_xj - i phi_yj) / 2 on the sampled grid
  auto real_partial = [&](int axis) -> ScalarField { return partial_derivative(phi, axis, 1); };
  DifferentialForm theta_hol(grid, D, 2, 1, Frame::Holomorphic, J);
  for (int j = 0; j < n; ++j) {
    ScalarField w = real_partial(j);
    if (full) w -= kI * real_partial(n + j);
    w *= 0.5;
    const DifferentialForm dw = exterior_derivative(DifferentialForm::function(w, D)).to_frame(Frame::Holomorphic, J);
    theta_hol += wedge(DifferentialForm::monomial(grid, D, {j}, 1.0, Frame::Holomorphic, J), dw);
  }
  DifferentialForm theta_conj = theta_hol.conj();
  DifferentialForm im_theta = theta_hol - theta_conj;
  im_theta *= 0.5;
  DifferentialForm re_theta = theta_hol + theta_conj;
  re_theta *= 0.5;

  // F = sum phi_{j k-bar} dz^j ^ dz-bar^k from the compact Hessian
  DifferentialForm F(grid, D, 2, 1, Frame::Holomorphic, J);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      ScalarField c = hessian_entry(phi, j, k);
      if (full) {
        c += hessian_entry(phi, n + j, n + k);
        c += kI * (hessian_entry(phi, j, n + k) - hessian_entry(phi, n + j, k));
      }
      c *= 0.25;
      F.set_component(pair_mask(j, n + k), c);
    }

  const DifferentialForm lhs = wedge_power(omega + im_theta, n);
  const DifferentialForm rhs = wedge_power(omega + F, n);

  CotangentReport r;
  r.difference = (lhs - rhs).max_abs();
  r.theta_hol_real_part = re_theta.max_abs();

  // zero section: Theta = omega^n against the volume density det g
  const ScalarField top0 = top_coefficient(wedge_power(omega, n));
  for (std::size_t p = 0; p < grid.node_count(); ++p) {
    Eigen::MatrixXcd G(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) G(j, k) = g[j * n + k][p];
    const Complex ratio = top0[p] / G.determinant();
    if (p == 0) r.zero_section_ratio = ratio;
    r.zero_section_ratio_spread =
        std::max(r.zero_section_ratio_spread, std::abs(ratio - r.zero_section_ratio) / std::abs(r.zero_section_ratio));
  }

  if (config.theta) {
    r.special_residual = max_imag_rotated(top_coefficient(lhs), *config.theta);
    r.dhym_residual = max_imag_rotated(top_coefficient(rhs), *config.theta);
  }
  return r;
}

ScalarField random_bundle_potential(const Grid& grid, std::uint64_t seed, int max_mode, double amplitude) {
  if (!grid.periodic()) throw InvalidArgument("random bundle potential needs a periodic grid");
  const int d = grid.dimension();
  Xorshift64Star rng(seed);
  struct Mode {
    std::vector<int> k;
    double a, b;
  };
  std::vector<Mode> modes;
  std::vector<int> k(d, -max_mode);
  while (true) {
    // keep one of each +-k pair: first nonzero entry positive
    const auto first = std::find_if(k.begin(), k.end(), [](int v) { return v != 0; });
    if (first != k.end() && *first > 0) {
      const double a = rng.uniform(-amplitude, amplitude);
      const double b = rng.uniform(-amplitude, amplitude);
      modes.push_back({k, a, b});
    }
    int axis = 0;
    while (axis < d && ++k[axis] > max_mode) k[axis++] = -max_mode;
    if (axis == d) break;
  }
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double v = 0.0;
    for (const Mode& mode : modes) {
      double t = 0.0;
      for (int a = 0; a < d; ++a)
        t += 2.0 * std::numbers::pi * mode.k[a] * (x[a] - grid.domain().lower(a)) / grid.domain().extent(a);
      v += mode.a * std::cos(t) + mode.b * std::sin(t);
    }
    return Complex(v);
  }, "phi_L");
}

}  // namespace mirrorforge
