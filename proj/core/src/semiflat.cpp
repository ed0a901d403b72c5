#include "mirrorforge/semiflat.hpp"

#include <cmath>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"
#include "small_linalg.hpp"

namespace mirrorforge {

using detail::SmallMatrix;

KahlerPotential KahlerPotential::from_expression(const Expression& expr, const Grid& grid, double c) {
  if (!(c > 0.0)) throw InvalidArgument("Monge-Ampere constant must be positive");
  KahlerPotential p{LiftedField::from_expression(expr, grid), c, expr.text()};
  return p;
}

std::vector<ScalarField> potential_hessian(const LiftedField& phi) {
  const int m = phi.dimension();
  std::vector<ScalarField> h(static_cast<std::size_t>(m * m), ScalarField(phi.grid()));
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      h[a * m + b] = phi.hessian(a, b);
      if (b != a) h[b * m + a] = h[a * m + b];
    }
  return h;
}

ScalarField hessian_determinant(const LiftedField& phi) {
  const int m = phi.dimension();
  const auto h = potential_hessian(phi);
  ScalarField det(phi.grid());
  SmallMatrix H(m, m);
  for (std::size_t n = 0; n < phi.grid().node_count(); ++n) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) H(a, b) = h[a * m + b][n].real();
    det[n] = H.determinant();
  }
  return det;
}

ScalarField ma_residual(const KahlerPotential& potential) {
  for (int a = 0; a < potential.dimension(); ++a)
    if (potential.grid().resolution(a) < 8) throw InvalidArgument("ma_residual needs resolution >= 8 per axis");
  ScalarField r = hessian_determinant(potential.phi);
  r += Complex(-potential.c);
  r.set_label("ma_residual");
  return r;
}

SemiFlatGeometry::SemiFlatGeometry(KahlerPotential potential) : potential_(std::move(potential)) {
  const int m = dimension();
  const Grid& g = grid();
  hess_ = potential_hessian(potential_.phi);
  inv_.assign(static_cast<std::size_t>(m * m), ScalarField(g));
  SmallMatrix H(m, m);
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) H(a, b) = hess_[a * m + b][n].real();
    Eigen::LLT<SmallMatrix> llt(H);
    if (llt.info() != Eigen::Success) {
      if (std::abs(H.determinant()) < 1e-300) throw InvalidArgument("singular potential Hessian");
      throw ConvexityError("potential Hessian is not positive definite at node " + std::to_string(n));
    }
    const SmallMatrix Hi = H.inverse();
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) inv_[a * m + b][n] = Hi(a, b);
  }
  third_.assign(static_cast<std::size_t>(m * m * m), ScalarField(g));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        third_[(i * m + j) * m + k] = partial_derivative(hess_[i * m + j], k, 1);
        third_[(j * m + i) * m + k] = third_[(i * m + j) * m + k];
      }
  gamma_.assign(static_cast<std::size_t>(m * m * m), ScalarField(g));
  for (int q = 0; q < m; ++q)
    for (int l = 0; l < m; ++l)
      for (int k = 0; k < m; ++k) {
        ScalarField& out = gamma_[(q * m + l) * m + k];
        for (int p = 0; p < m; ++p) out += inverse_hessian(p, q) * third(l, k, p);
      }
}

ScalarField SemiFlatGeometry::det_hessian() const { return hessian_determinant(potential_.phi); }

std::vector<ScalarField> SemiFlatGeometry::metric() const {
  const int m = dimension();
  const int D = 2 * m;
  std::vector<ScalarField> g(static_cast<std::size_t>(D * D), ScalarField(grid()));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      g[a * D + b] = hessian(a, b);
      g[(m + a) * D + (m + b)] = hessian(a, b);
    }
  return g;
}

DifferentialForm SemiFlatGeometry::kahler_form() const {
  const int m = dimension();
  const auto J = ComplexStructure::standard(m);
  DifferentialForm omega(grid(), 2 * m, 2, 1, Frame::Holomorphic, J);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      omega += scale(DifferentialForm::monomial(grid(), 2 * m, {i, m + j}, Complex(0.0, 0.5), Frame::Holomorphic, J),
                     hessian(i, j));
  return omega;
}

DifferentialForm SemiFlatGeometry::holomorphic_volume() const {
  const int m = dimension();
  std::vector<int> slots(m);
  for (int j = 0; j < m; ++j) slots[j] = j;
  return DifferentialForm::monomial(grid(), 2 * m, slots, 1.0, Frame::Holomorphic, ComplexStructure::standard(m));
}

double SemiFlatGeometry::inverse_defect() const {
  const int m = dimension();
  double worst = 0.0;
  for (std::size_t n = 0; n < grid().node_count(); ++n)
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) {
        Complex s = 0.0;
        for (int j = 0; j < m; ++j) s += inverse_hessian(i, j)[n] * hessian(j, k)[n];
        worst = std::max(worst, std::abs(s - (i == k ? 1.0 : 0.0)));
      }
  return worst;
}

double calabi_identity_residual(const SemiFlatGeometry& geometry) {
  const int m = geometry.dimension();
  const DifferentialForm Omega = geometry.holomorphic_volume();
  const ScalarField top = top_coefficient(wedge(Omega, Omega.conj()));
  const ScalarField vol = top_coefficient(wedge_power(geometry.kahler_form(), m));
  // Box faces carry no equation (Dirichlet data), so only interior nodes count there.
  const Grid& grid = geometry.grid();
  std::vector<Complex> ratio;
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    if (grid.periodic() || !grid.on_boundary(n)) ratio.push_back(top[n] / vol[n]);
  if (ratio.empty()) return 0.0;
  const Complex mean = pairwise_sum(ratio) / static_cast<double>(ratio.size());
  double worst = 0.0;
  for (const Complex& v : ratio) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

}  // namespace mirrorforge
