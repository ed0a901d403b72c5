#include "mirrorforge/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place DFT over the grid layout (axis 0 fastest, so FFTW sees reversed dims).
void transform(const Grid& grid, std::vector<Complex>& data, int sign) {
  const int m = grid.dimension();
  std::vector<int> dims(m);
  for (int a = 0; a < m; ++a) dims[a] = grid.count(m - 1 - a);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(m, dims.data(), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

int signed_frequency(int k, int n) { return (2 * k <= n) ? k : k - n; }

bool is_nyquist(int k, int n) { return n % 2 == 0 && 2 * k == n; }

// Sum over the fastest remaining axis: out[j] = sum_k in[k + n j] w[k].
std::vector<Complex> contract(const std::vector<Complex>& in, const std::vector<Complex>& w) {
  const std::size_t n = w.size();
  const std::size_t rest = in.size() / n;
  std::vector<Complex> out(rest);
  for (std::size_t j = 0; j < rest; ++j) {
    Complex s = 0.0;
    const Complex* row = in.data() + j * n;
    for (std::size_t k = 0; k < n; ++k) s += row[k] * w[k];
    out[j] = s;
  }
  return out;
}

}  // namespace

SpectralField::SpectralField(const ScalarField& field) : grid_(field.grid()) {
  if (!grid_.periodic()) throw InvalidArgument("spectral interpolation requires a periodic grid");
  coeff_.assign(field.values().begin(), field.values().end());
  transform(grid_, coeff_, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(grid_.node_count());
  for (auto& c : coeff_) c *= scale;
}

void SpectralField::phases(int axis, double x, std::vector<Complex>& w, std::vector<Complex>* dw) const {
  const int n = grid_.count(axis);
  const double L = grid_.domain().extent(axis);
  const double t = 2.0 * std::numbers::pi * (x - grid_.domain().lower(axis)) / L;
  const double kscale = 2.0 * std::numbers::pi / L;
  w.resize(n);
  if (dw) dw->resize(n);
  for (int k = 0; k < n; ++k) {
    if (is_nyquist(k, n)) {
      const double q = 0.5 * n;
      w[k] = std::cos(q * t);
      if (dw) (*dw)[k] = -q * kscale * std::sin(q * t);
    } else {
      const int kk = signed_frequency(k, n);
      w[k] = std::polar(1.0, kk * t);
      if (dw) (*dw)[k] = Complex(0.0, kk * kscale) * w[k];
    }
  }
}

Complex SpectralField::value(std::span<const double> x) const {
  const int m = grid_.dimension();
  std::vector<Complex> acc = coeff_;
  std::vector<Complex> w;
  for (int a = 0; a < m; ++a) {
    phases(a, x[a], w, nullptr);
    acc = contract(acc, w);
  }
  return acc[0];
}

Complex SpectralField::value_and_gradient(std::span<const double> x, std::span<Complex> gradient) const {
  const int m = grid_.dimension();
  std::vector<std::vector<Complex>> w(m), dw(m);
  for (int a = 0; a < m; ++a) phases(a, x[a], w[a], &dw[a]);
  // After contracting axis 0 both ways, every later branch reuses the shared prefix.
  std::vector<Complex> plain = contract(coeff_, w[0]);
  std::vector<std::vector<Complex>> branch(m);
  branch[0] = contract(coeff_, dw[0]);
  for (int a = 1; a < m; ++a) {
    for (int b = 0; b < a; ++b) branch[b] = contract(branch[b], w[a]);
    branch[a] = contract(plain, dw[a]);
    plain = contract(plain, w[a]);
  }
  for (int a = 0; a < m; ++a) gradient[a] = branch[a][0];
  return plain[0];
}

ScalarField SpectralField::derivative(std::span<const int> orders) const {
  const int m = grid_.dimension();
  std::vector<Complex> data = coeff_;
  for (std::size_t node = 0; node < data.size(); ++node) {
    Complex factor = 1.0;
    for (int a = 0; a < m; ++a) {
      const int order = orders[a];
      if (order == 0) continue;
      const int n = grid_.count(a);
      const int k = grid_.index(node, a);
      const double kscale = 2.0 * std::numbers::pi / grid_.domain().extent(a);
      if (is_nyquist(k, n)) {
        if (order % 2 == 1) {
          factor = 0.0;
        } else {
          const double q = 0.5 * n * kscale;
          factor *= std::pow(-q * q, order / 2);
        }
      } else {
        factor *= std::pow(Complex(0.0, signed_frequency(k, n) * kscale), order);
      }
    }
    data[node] *= factor;
  }
  transform(grid_, data, FFTW_BACKWARD);
  return ScalarField(grid_, std::move(data));
}

ScalarField spectral_derivative(const ScalarField& field, int axis, int order) {
  std::vector<int> orders(field.grid().dimension(), 0);
  orders.at(axis) = order;
  return SpectralField(field).derivative(orders);
}

}  // namespace mirrorforge
