#include "mirrorforge/interpolation.hpp"

#include <array>
#include <cmath>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

std::string to_string(InterpolationMethod method) {
  return method == InterpolationMethod::Spectral ? "spectral" : "cubic";
}

InterpolationMethod interpolation_from_string(const std::string& name) {
  if (name == "spectral") return InterpolationMethod::Spectral;
  if (name == "cubic") return InterpolationMethod::Cubic;
  throw InvalidArgument("unknown interpolation method '" + name + "'");
}

Interpolant::Interpolant(const ScalarField& field, InterpolationMethod method)
    : method_(method), field_(field) {
  if (method == InterpolationMethod::Spectral) spectral_ = std::make_shared<SpectralField>(field);
}

namespace {

// Node index when x coincides with a grid node (up to roundoff), otherwise -1.
long on_node(const Grid& grid, std::span<const double> x) {
  std::size_t node = 0;
  for (int a = 0; a < grid.dimension(); ++a) {
    const double t = (x[a] - grid.domain().lower(a)) / grid.spacing(a);
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-12 * std::max(1.0, std::abs(t))) return -1;
    long k = static_cast<long>(r);
    if (grid.periodic()) {
      k %= grid.count(a);
      if (k < 0) k += grid.count(a);
    } else if (k < 0 || k >= grid.count(a)) {
      return -1;
    }
    node += static_cast<std::size_t>(k) * grid.stride(a);
  }
  return static_cast<long>(node);
}

}  // namespace

Complex Interpolant::value(std::span<const double> x) const {
  if (const long node = on_node(field_.grid(), x); node >= 0) return field_[static_cast<std::size_t>(node)];
  if (spectral_) return spectral_->value(x);
  return cubic(x, {}, false);
}

Complex Interpolant::value_and_gradient(std::span<const double> x, std::span<Complex> gradient) const {
  const Complex v = spectral_ ? spectral_->value_and_gradient(x, gradient) : cubic(x, gradient, true);
  if (const long node = on_node(field_.grid(), x); node >= 0) return field_[static_cast<std::size_t>(node)];
  return v;
}

Complex Interpolant::cubic(std::span<const double> x, std::span<Complex> gradient, bool want_gradient) const {
  const Grid& grid = field_.grid();
  const int m = grid.dimension();
  std::array<std::array<double, 4>, Domain::kMaxDimension> w{}, dw{};
  std::array<std::array<std::size_t, 4>, Domain::kMaxDimension> offset{};
  for (int a = 0; a < m; ++a) {
    const double h = grid.spacing(a);
    const double lo = grid.domain().lower(a);
    double t = (x[a] - lo) / h;
    int start;
    if (grid.periodic()) {
      start = static_cast<int>(std::floor(t)) - 1;
    } else {
      const double slack = 1e-9 * grid.resolution(a);
      if (t < -slack || t > grid.resolution(a) + slack)
        throw DomainError("interpolation point outside the box on axis " + std::to_string(a));
      start = static_cast<int>(std::floor(t)) - 1;
      start = std::max(0, std::min(start, grid.count(a) - 4));
    }
    for (int j = 0; j < 4; ++j) {
      const double sj = start + j;
      double num = 1.0, den = 1.0, dnum = 0.0;
      for (int k = 0; k < 4; ++k) {
        if (k == j) continue;
        const double sk = start + k;
        den *= (sj - sk);
        // derivative of the product by the product rule
        dnum = dnum * (t - sk) + num;
        num *= (t - sk);
      }
      w[a][j] = num / den;
      dw[a][j] = dnum / den / h;
      int idx = start + j;
      if (grid.periodic()) {
        idx %= grid.count(a);
        if (idx < 0) idx += grid.count(a);
      }
      offset[a][j] = static_cast<std::size_t>(idx) * grid.stride(a);
    }
  }
  const auto values = field_.values();
  Complex result = 0.0;
  std::array<Complex, Domain::kMaxDimension> grad{};
  int total = 1;
  for (int a = 0; a < m; ++a) total *= 4;
  for (int c = 0; c < total; ++c) {
    int rem = c;
    std::size_t node = 0;
    std::array<int, Domain::kMaxDimension> j{};
    double weight = 1.0;
    for (int a = 0; a < m; ++a) {
      j[a] = rem % 4;
      rem /= 4;
      node += offset[a][j[a]];
      weight *= w[a][j[a]];
    }
    const Complex v = values[node];
    result += weight * v;
    if (want_gradient) {
      for (int a = 0; a < m; ++a) {
        double g = dw[a][j[a]];
        for (int b = 0; b < m; ++b)
          if (b != a) g *= w[b][j[b]];
        grad[a] += g * v;
      }
    }
  }
  if (want_gradient)
    for (int a = 0; a < m; ++a) gradient[a] = grad[a];
  return result;
}

}  // namespace mirrorforge
