#include "mirrorforge/transform.hpp"

#include <cmath>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

namespace {

const Complex kI(0.0, 1.0);

// Conjugate transpose of every matrix coefficient together with conjugation of the basis.
DifferentialForm adjoint(const DifferentialForm& a) {
  DifferentialForm out = a.to_frame(Frame::Real).conj();
  const int r = a.rank();
  if (r == 1) return out;
  for (AxisMask mask : out.masks()) {
    auto c = out.coefficients(mask);
    for (std::size_t n = 0; n < out.grid().node_count(); ++n)
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) std::swap(c[(n * r + i) * r + j], c[(n * r + j) * r + i]);
  }
  return out;
}

// Im[X] = (X - X^dagger) / 2i
DifferentialForm imaginary_part(const DifferentialForm& x) {
  DifferentialForm out = x.to_frame(Frame::Real) - adjoint(x);
  out *= Complex(0.0, -0.5);
  return out;
}

DifferentialForm promote(const DifferentialForm& a, int rank) {
  if (a.rank() == rank) return a;
  return wedge(DifferentialForm::identity(a.grid(), a.space_dimension(), rank), a);
}

DifferentialForm covariant_exterior(const DifferentialForm& B, const DifferentialForm& A) {
  DifferentialForm out = exterior_derivative(B);
  if (A.max_abs() == 0.0) return out;
  out += wedge(A, B);
  DifferentialForm right = wedge(B, A);
  right *= (B.degree() % 2) ? -1.0 : 1.0;
  out -= right;
  return out;
}

}  // namespace

MirrorConnection::MirrorConnection(std::shared_ptr<const DualGeometry> dual, DifferentialForm A, double theta)
    : dual_(std::move(dual)), A_(std::move(A)), theta_(theta) {
  if (!dual_) throw InvalidArgument("MirrorConnection needs a dual geometry");
  require_same_grid(A_.grid(), dual_->grid(), "MirrorConnection");
  if (A_.degree() != 1 || A_.space_dimension() != 2 * dual_->dimension())
    throw InvalidArgument("MirrorConnection: A must be a one-form on the 2m-dimensional mirror");
}

ScalarField MirrorConnection::section(int j) const {
  const int m = dimension();
  const DifferentialForm real = A_.to_frame(Frame::Real);
  ScalarField c = real.component(AxisMask{1} << (m + j), 0, 0);
  c *= -kI;
  return c;
}

DifferentialForm MirrorConnection::background() const {
  const int m = dimension();
  DifferentialForm out(A_.grid(), 2 * m, 1, rank());
  const DifferentialForm real = A_.to_frame(Frame::Real);
  for (int j = 0; j < m; ++j) {
    const AxisMask mask = AxisMask{1} << (m + j);
    const auto src = real.coefficients(mask);
    auto dst = out.coefficients(mask);
    const int r = rank();
    // keep the scalar (identity) part only
    for (std::size_t n = 0; n < A_.grid().node_count(); ++n) {
      Complex tr = 0.0;
      for (int i = 0; i < r; ++i) tr += src[(n * r + i) * r + i];
      for (int i = 0; i < r; ++i) dst[(n * r + i) * r + i] = tr / static_cast<double>(r);
    }
  }
  return out;
}

DifferentialForm MirrorConnection::curvature() const {
  const DifferentialForm A = A_.to_frame(Frame::Real);
  return exterior_derivative(A) + wedge(A, A);
}

MirrorConnection fm_transform(const SectionCycle& cycle, const ConnectionOnC& connection,
                              std::shared_ptr<const DualGeometry> dual) {
  if (!dual) throw InvalidArgument("fm_transform needs a dual geometry");
  require_same_grid(cycle.geometry().grid(), dual->base().grid(), "fm_transform");
  require_same_grid(connection.grid(), cycle.geometry().grid(), "fm_transform");
  const int m = cycle.dimension();
  if (cycle.geometry().grid().periodic()) {
    const auto& lift = cycle.potential().lift();
    for (double q : lift.quadratic)
      if (q != 0.0) throw InvalidArgument("fm_transform: on a torus f must be linear plus periodic");
  }
  const int r = connection.rank();
  const Grid& grid = dual->grid();
  DifferentialForm A(grid, 2 * m, 1, r);
  for (int j = 0; j < m; ++j) {
    ScalarField y = dual->compose(cycle.section(j));
    y *= kI;
    MatrixField block(grid, r);
    for (std::size_t n = 0; n < grid.node_count(); ++n)
      for (int i = 0; i < r; ++i) block.at(n, i, i) = y[n];
    A.set_component(AxisMask{1} << (m + j), block);
  }
  std::vector<MatrixField> E;
  for (int k = 0; k < m; ++k) E.push_back(dual->compose(connection.E(k)));
  for (int j = 0; j < m; ++j) {
    MatrixField block(grid, r);
    for (int k = 0; k < m; ++k) {
      const ScalarField& inv = dual->inverse_hessian(k, j);
      for (std::size_t n = 0; n < grid.node_count(); ++n)
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) block.at(n, a, b) += kI * E[k].at(n, a, b) * inv[n];
    }
    A.set_component(AxisMask{1} << j, block);
  }
  return MirrorConnection(std::move(dual), std::move(A), cycle.theta());
}

MirrorConnection fm_transform(const SectionCycle& cycle, const ConnectionOnC& connection, const DualOptions& options) {
  auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(cycle.geometry(), options));
  return fm_transform(cycle, connection, std::move(dual));
}

double f02_residual(const MirrorConnection& mc, int min_depth) {
  return type_component(mc.curvature(), mc.dual().complex_structure(), 0, 2).max_abs(min_depth);
}

ScalarField dhym_residual(const MirrorConnection& mc) {
  const int m = mc.dimension();
  const DifferentialForm X = promote(mc.dual().kahler_form().to_frame(Frame::Real), mc.rank()) + mc.curvature();
  const DifferentialForm power = mc.rank() == 1 ? wedge_power(X, m) : wedge_symmetrized(std::vector(m, X));
  ScalarField top = top_coefficient(power);
  const Complex e = std::polar(1.0, -mc.theta());
  ScalarField out(top.grid(), "dhym_residual");
  for (std::size_t n = 0; n < top.size(); ++n) out[n] = (e * top[n]).imag();
  return out;
}

double kappa_dhym(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return ((m * (m - 1) / 2) % 2) ? -f : f;
}

DifferentialForm transform_form(const DifferentialForm& B, FormTransform mode, const DualGeometry& dual) {
  const int m = dual.dimension();
  if (B.space_dimension() != m || B.sampled_dimension() != m)
    throw InvalidArgument("transform_form: B must be a form on the base");
  require_same_grid(B.grid(), dual.base().grid(), "transform_form");
  const auto J = dual.complex_structure();
  const Grid& grid = dual.grid();
  const double c = mode == FormTransform::Phi ? -0.5 : 0.5;
  std::vector<DifferentialForm> image;
  for (int j = 0; j < m; ++j) {
    DifferentialForm one(grid, 2 * m, 1, 1, Frame::Holomorphic, J);
    for (int k = 0; k < m; ++k) {
      ScalarField coeff = dual.inverse_hessian(j, k);
      coeff *= c;
      one.set_component(AxisMask{1} << (m + k), coeff);
    }
    image.push_back(std::move(one));
  }
  const DifferentialForm real = B.to_frame(Frame::Real);
  DifferentialForm out(grid, 2 * m, B.degree(), B.rank(), Frame::Holomorphic, J);
  for (AxisMask mask : real.masks()) {
    const MatrixField coeff = real.matrix_component(mask);
    if (coeff.max_abs() == 0.0) continue;
    DifferentialForm term = DifferentialForm::function(dual.compose(coeff), 2 * m).to_frame(Frame::Holomorphic, J);
    for (int j : mask_axes(mask)) term = wedge(term, image[j]);
    out += term;
  }
  return out;
}

std::pair<double, double> deformed_harmonic_residual(const DifferentialForm& B, const MirrorConnection& mc,
                                                     int min_depth) {
  const int m = mc.dimension();
  const int q = B.degree();
  if (q > m) throw InvalidArgument("deformed_harmonic_residual: degree above m");
  const auto J = mc.dual().complex_structure();
  const int r = std::max(B.rank(), mc.rank());
  const DifferentialForm Bp = promote(B, r);
  const DifferentialForm A = promote(mc.form(), r);
  const DifferentialForm dB = covariant_exterior(Bp.to_frame(Frame::Real), A.to_frame(Frame::Real));
  const double dbar = type_component(dB, J, 0, q + 1).max_abs(min_depth);
  const DifferentialForm del = type_component(dB, J, 1, q).to_frame(Frame::Real);
  const DifferentialForm X = promote(mc.dual().kahler_form().to_frame(Frame::Real), r) + promote(mc.curvature(), r);
  std::vector<DifferentialForm> factors(static_cast<std::size_t>(m - q), X);
  factors.push_back(del);
  DifferentialForm Y = r == 1 ? wedge(wedge_power(X, m - q), del) : wedge_symmetrized(factors);
  Y *= std::polar(1.0, -mc.theta());
  return {dbar, imaginary_part(Y).max_abs(min_depth)};
}

}  // namespace mirrorforge
