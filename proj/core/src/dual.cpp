#include "mirrorforge/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"
#include "mirrorforge/spectral.hpp"
#include "small_linalg.hpp"

namespace mirrorforge {

using detail::SmallMatrix;

InterpolationMethod default_interpolation(const Grid& grid) {
  return (grid.periodic() && grid.node_count() <= 8192) ? InterpolationMethod::Spectral : InterpolationMethod::Cubic;
}

void DualGeometry::forward_at(std::span<const double> x, std::span<double> xt, std::span<double> jacobian) const {
  const int m = dimension();
  std::array<Complex, Domain::kMaxDimension> grad{};
  for (int j = 0; j < m; ++j) {
    const Complex v = jacobian.empty() ? gradient_remainder_[j]->value(x)
                                       : gradient_remainder_[j]->value_and_gradient(x, std::span(grad.data(), m));
    xt[j] = lift_.derivative(x, j) + v.real();
    if (!jacobian.empty())
      for (int k = 0; k < m; ++k) jacobian[j * m + k] = lift_.hessian(j, k) + grad[k].real();
  }
}

DualGeometry DualGeometry::build(const SemiFlatGeometry& geometry, const DualOptions& options) {
  DualGeometry d;
  d.base_ = std::make_shared<const SemiFlatGeometry>(geometry);
  const Grid& base = geometry.grid();
  const int m = base.dimension();
  const LiftedField& phi = geometry.potential().phi;
  d.method_ = options.interpolation.value_or(default_interpolation(base));
  if (d.method_ == InterpolationMethod::Spectral && !base.periodic())
    throw InvalidArgument("spectral interpolation needs a periodic base");
  d.lift_ = phi.lift();

  // Gradient of the remainder: spectral derivative in spectral mode so that the map and
  // its Jacobian come from one trigonometric interpolant.
  for (int j = 0; j < m; ++j) {
    ScalarField dj = d.method_ == InterpolationMethod::Spectral ? spectral_derivative(phi.remainder(), j, 1)
                                                                 : partial_derivative(phi.remainder(), j, 1);
    d.gradient_remainder_.push_back(std::make_shared<const Interpolant>(dj, d.method_));
    ScalarField fw = dj;
    std::vector<double> x(m);
    for (std::size_t n = 0; n < base.node_count(); ++n) {
      base.coordinates(n, x);
      fw[n] = fw[n].real() + d.lift_.derivative(x, j);
    }
    fw.set_label("xt" + std::to_string(j + 1));
    d.forward_.push_back(std::move(fw));
  }

  if (base.periodic()) {
    std::vector<double> lower(m), period(m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        if (i != k && d.lift_.hessian(i, k) != 0.0)
          throw InvalidArgument("periodic dual geometry needs a diagonal quadratic part");
    std::vector<double> x0(m);
    for (int i = 0; i < m; ++i) x0[i] = base.domain().lower(i);
    for (int i = 0; i < m; ++i) {
      const double q = d.lift_.hessian(i, i);
      if (!(q > 0.0)) throw ConvexityError("quadratic part of the potential is not positive definite");
      lower[i] = d.lift_.derivative(x0, i);
      period[i] = q * base.domain().extent(i);
    }
    d.grid_ = Grid(Domain::torus(lower, period), base.resolutions());
  } else {
    std::vector<double> lower(m, -std::numeric_limits<double>::infinity());
    std::vector<double> upper(m, std::numeric_limits<double>::infinity());
    for (std::size_t n = 0; n < base.node_count(); ++n)
      for (int j = 0; j < m; ++j) {
        const int idx = base.index(n, j);
        const double v = d.forward_[j][n].real();
        if (idx == 0) lower[j] = std::max(lower[j], v);
        if (idx == base.count(j) - 1) upper[j] = std::min(upper[j], v);
      }
    for (int j = 0; j < m; ++j)
      if (!(upper[j] > lower[j])) throw InvalidArgument("image of the base box contains no coordinate box");
    d.grid_ = Grid(Domain::box(lower, upper), base.resolutions());
  }

  // Inverse map by Newton per dual node. The face extremes only bound the image at the
  // nodes; on a box the candidate is shrunk and retried while some preimage falls outside.
  constexpr int kShrinkAttempts = 8;
  constexpr double kShrink = 0.01;
  for (int attempt = 0;; ++attempt) {
    const Grid& dual = d.grid_;
    d.preimage_.assign(m, ScalarField(dual));
    std::vector<double> center(m);
    for (int i = 0; i < m; ++i) center[i] = 0.5 * (base.domain().lower(i) + base.domain().upper(i));
    std::vector<int> steps_used(dual.node_count(), 0);
    std::vector<std::string> failures(dual.node_count());
    parallel_for(dual.node_count(), [&](std::size_t begin, std::size_t end) {
      std::vector<double> xt(m), x(m), f(m), trial(m), ftrial(m), jac(m * m);
      SmallMatrix J(m, m);
      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1> r(m), dx(m);
      for (std::size_t n = begin; n < end; ++n) {
        dual.coordinates(n, xt);
        try {
          if (base.periodic()) {
            for (int i = 0; i < m; ++i) x[i] = (xt[i] - d.lift_.linear[i]) / d.lift_.hessian(i, i);
          } else {
            d.forward_at(center, f, jac);
            for (int i = 0; i < m; ++i) {
              r[i] = xt[i] - f[i];
              for (int k = 0; k < m; ++k) J(i, k) = jac[i * m + k];
            }
            dx = J.partialPivLu().solve(r);
            for (int i = 0; i < m; ++i)
              x[i] = std::clamp(center[i] + dx[i], base.domain().lower(i), base.domain().upper(i));
          }
          double scale = 1.0;
          for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(xt[i]));
          int step = 0;
          double norm = 0.0;
          for (;; ++step) {
            d.forward_at(x, f, jac);
            norm = 0.0;
            for (int i = 0; i < m; ++i) {
              r[i] = f[i] - xt[i];
              norm = std::max(norm, std::abs(r[i]));
              for (int k = 0; k < m; ++k) J(i, k) = jac[i * m + k];
            }
            if (norm <= options.newton_tolerance * scale || step >= options.newton_steps) break;
            dx = J.partialPivLu().solve(r);
            double alpha = 1.0;
            bool moved = false;
            for (int h = 0; h < 30; ++h, alpha *= 0.5) {
              for (int i = 0; i < m; ++i) trial[i] = x[i] - alpha * dx[i];
              try {
                d.forward_at(trial, ftrial);
              } catch (const DomainError&) {
                continue;
              }
              double tn = 0.0;
              for (int i = 0; i < m; ++i) tn = std::max(tn, std::abs(ftrial[i] - xt[i]));
              if (tn < norm || h == 29) {
                moved = true;
                break;
              }
            }
            if (!moved) throw DomainError("no admissible Newton step");
            x = trial;
          }
          // Roundoff floor: accept a few ulps above the requested tolerance.
          if (norm > std::max(options.newton_tolerance * scale, 1e-10))
            failures[n] = "no convergence (residual " + std::to_string(norm) + ")";
          steps_used[n] = step;
          for (int i = 0; i < m; ++i) d.preimage_[i][n] = x[i];
        } catch (const DomainError&) {
          failures[n] = "preimage leaves the base box";
        }
      }
    });
    const auto bad = std::find_if(failures.begin(), failures.end(), [](const std::string& f) { return !f.empty(); });
    if (bad == failures.end()) {
      d.newton_steps_ = *std::max_element(steps_used.begin(), steps_used.end());
      break;
    }
    const bool outside = *bad == "preimage leaves the base box";
    if (base.periodic() || !outside || attempt + 1 >= kShrinkAttempts)
      throw DivergenceError("inverse dual map at node " + std::to_string(bad - failures.begin()) + ": " + *bad);
    std::vector<double> lower(m), upper(m);
    for (int j = 0; j < m; ++j) {
      const double e = kShrink * dual.domain().extent(j);
      lower[j] = dual.domain().lower(j) + e;
      upper[j] = dual.domain().upper(j) - e;
    }
    d.grid_ = Grid(Domain::box(lower, upper), base.resolutions());
  }

  for (int i = 0; i < m; ++i) d.preimage_[i].set_label("x" + std::to_string(i + 1));
  d.hess_.reserve(m * m);
  d.inv_.reserve(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      d.hess_.push_back(d.compose(geometry.hessian(i, j)));
      d.inv_.push_back(d.compose(geometry.inverse_hessian(i, j)));
    }
  return d;
}

ScalarField DualGeometry::compose(const ScalarField& base_field) const {
  require_same_grid(base_field.grid(), base().grid(), "DualGeometry::compose");
  const Interpolant interp(base_field, method_);
  const int m = dimension();
  ScalarField out(grid_, base_field.label());
  parallel_for(grid_.node_count(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(m);
    for (std::size_t n = begin; n < end; ++n) {
      for (int i = 0; i < m; ++i) x[i] = preimage_[i][n].real();
      out[n] = interp.value(x);
    }
  });
  return out;
}

ScalarField DualGeometry::compose(const LiftedField& base_field) const {
  ScalarField out = compose(base_field.remainder());
  const int m = dimension();
  std::vector<double> x(m);
  for (std::size_t n = 0; n < grid_.node_count(); ++n) {
    for (int i = 0; i < m; ++i) x[i] = preimage_[i][n].real();
    out[n] += base_field.lift().value(x);
  }
  return out;
}

MatrixField DualGeometry::compose(const MatrixField& base_field) const {
  const int r = base_field.rank();
  std::vector<ScalarField> entries;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) entries.push_back(compose(base_field.entry(a, b)));
  return MatrixField::from_entries(entries, r);
}

std::vector<ScalarField> DualGeometry::metric() const {
  const int m = dimension();
  const int D = 2 * m;
  std::vector<ScalarField> g(static_cast<std::size_t>(D * D), ScalarField(grid_));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      g[a * D + b] = inverse_hessian(a, b);
      g[(m + a) * D + (m + b)] = inverse_hessian(a, b);
    }
  return g;
}

DifferentialForm DualGeometry::kahler_form() const {
  const int m = dimension();
  const auto J = complex_structure();
  DifferentialForm omega(grid_, 2 * m, 2, 1, Frame::Holomorphic, J);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      omega += scale(DifferentialForm::monomial(grid_, 2 * m, {i, m + j}, Complex(0.0, 0.5), Frame::Holomorphic, J),
                     inverse_hessian(i, j));
  return omega;
}

DifferentialForm DualGeometry::holomorphic_volume() const {
  const int m = dimension();
  std::vector<int> slots(m);
  for (int j = 0; j < m; ++j) slots[j] = j;
  return DifferentialForm::monomial(grid_, 2 * m, slots, 1.0, Frame::Holomorphic, complex_structure());
}

KahlerPotential DualGeometry::dual_potential() const {
  const int m = dimension();
  const KahlerPotential& p = base().potential();
  PolynomialLift lift = PolynomialLift::zero(m);
  if (grid_.periodic()) {
    double bqb = 0.0;
    for (int i = 0; i < m; ++i) {
      const double q = lift_.hessian(i, i);
      lift.quadratic[i * m + i] = 1.0 / q;
      lift.linear[i] = -lift_.linear[i] / q;
      bqb += lift_.linear[i] * lift_.linear[i] / q;
    }
    lift.constant = 0.5 * bqb - lift_.constant;
  }
  const ScalarField phi_at_x = compose(p.phi);
  ScalarField rem(grid_, "Phi");
  std::vector<double> xt(m);
  for (std::size_t n = 0; n < grid_.node_count(); ++n) {
    grid_.coordinates(n, xt);
    double v = -phi_at_x[n].real();
    for (int i = 0; i < m; ++i) v += xt[i] * preimage_[i][n].real();
    rem[n] = v - lift.value(xt);
  }
  return KahlerPotential{LiftedField(std::move(lift), std::move(rem)), 1.0 / p.c, {}};
}

double DualGeometry::round_trip_error() const {
  const int m = dimension();
  std::vector<double> x(m), xt(m), f(m);
  double worst = 0.0;
  for (std::size_t n = 0; n < grid_.node_count(); ++n) {
    grid_.coordinates(n, xt);
    for (int i = 0; i < m; ++i) x[i] = preimage_[i][n].real();
    forward_at(x, f);
    for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(f[i] - xt[i]));
  }
  return worst;
}

double calabi_identity_residual(const DualGeometry& dual) {
  const int m = dual.dimension();
  const DifferentialForm Omega = dual.holomorphic_volume();
  const ScalarField top = top_coefficient(wedge(Omega, Omega.conj()));
  const ScalarField vol = top_coefficient(wedge_power(dual.kahler_form(), m));
  const Grid& grid = dual.grid();
  std::vector<Complex> ratio;
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    if (grid.periodic() || !grid.on_boundary(n)) ratio.push_back(top[n] / vol[n]);
  if (ratio.empty()) return 0.0;
  const Complex mean = pairwise_sum(ratio) / static_cast<double>(ratio.size());
  double worst = 0.0;
  for (const Complex& v : ratio) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

InvolutionReport dual_of_dual(const SemiFlatGeometry& geometry, const DualOptions& options) {
  const DualGeometry first = DualGeometry::build(geometry, options);
  const SemiFlatGeometry dual_geo(first.dual_potential());
  const KahlerPotential back = DualGeometry::build(dual_geo, options).dual_potential();
  InvolutionReport r;
  r.round_trip = first.round_trip_error();
  const int m = geometry.dimension();
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      r.hessian_error = std::max(r.hessian_error, (back.phi.hessian(a, b) - geometry.hessian(a, b)).max_abs());
  r.potential_error = (back.phi.values() - geometry.potential().phi.values()).max_abs();
  return r;
}

}  // namespace mirrorforge
