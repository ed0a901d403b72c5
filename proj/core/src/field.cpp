#include "mirrorforge/field.hpp"

#include <algorithm>
#include <cmath>

#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"

namespace mirrorforge {

ScalarField::ScalarField(Grid grid, std::string label)
    : grid_(std::move(grid)), values_(grid_.node_count()), label_(std::move(label)) {}

ScalarField::ScalarField(Grid grid, std::vector<Complex> values, std::string label)
    : grid_(std::move(grid)), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != grid_.node_count()) throw InvalidArgument("field value count does not match grid");
}

ScalarField ScalarField::constant(const Grid& grid, Complex value, std::string label) {
  return ScalarField(grid, std::vector<Complex>(grid.node_count(), value), std::move(label));
}

ScalarField ScalarField::from_function(const Grid& grid,
                                       const std::function<Complex(std::span<const double>)>& fn,
                                       std::string label) {
  ScalarField out(grid, std::move(label));
  std::vector<double> x(grid.dimension());
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    grid.coordinates(n, x);
    out[n] = fn(x);
  }
  return out;
}

bool ScalarField::is_real(double tolerance) const { return max_imag() <= tolerance; }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::max_imag() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v.imag()));
  return m;
}

Complex ScalarField::mean() const {
  return pairwise_sum(std::span<const Complex>(values_)) / static_cast<double>(values_.size());
}

ScalarField ScalarField::map(const std::function<Complex(Complex)>& fn) const {
  ScalarField out(grid_, label_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = fn(values_[i]);
  return out;
}

ScalarField ScalarField::real_part() const {
  return map([](Complex v) { return Complex(v.real(), 0.0); });
}
ScalarField ScalarField::imag_part() const {
  return map([](Complex v) { return Complex(v.imag(), 0.0); });
}
ScalarField ScalarField::conj() const {
  return map([](Complex v) { return std::conj(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}
ScalarField& ScalarField::operator*=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field product");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
  return *this;
}
ScalarField& ScalarField::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}
ScalarField& ScalarField::operator+=(Complex s) {
  for (auto& v : values_) v += s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(Complex s, ScalarField a) { return a *= s; }
ScalarField operator-(ScalarField a) { return a *= Complex(-1.0); }

MatrixField::MatrixField(Grid grid, int rank)
    : grid_(std::move(grid)), rank_(rank), data_(grid_.node_count() * rank * rank) {
  if (rank < 1) throw InvalidArgument("matrix rank must be positive");
}

MatrixField::MatrixField(const ScalarField& scalar)
    : grid_(scalar.grid()), rank_(1), data_(scalar.values().begin(), scalar.values().end()) {}

MatrixField MatrixField::identity(const Grid& grid, int rank) {
  MatrixField out(grid, rank);
  for (std::size_t n = 0; n < grid.node_count(); ++n)
    for (int a = 0; a < rank; ++a) out.at(n, a, a) = 1.0;
  return out;
}

MatrixField MatrixField::from_entries(const std::vector<ScalarField>& entries, int rank) {
  if (entries.size() != static_cast<std::size_t>(rank * rank))
    throw InvalidArgument("matrix field needs rank^2 entries");
  MatrixField out(entries.front().grid(), rank);
  for (int a = 0; a < rank; ++a)
    for (int b = 0; b < rank; ++b) {
      const auto& e = entries[a * rank + b];
      require_same_grid(out.grid(), e.grid(), "matrix field assembly");
      for (std::size_t n = 0; n < out.grid().node_count(); ++n) out.at(n, a, b) = e[n];
    }
  return out;
}

ScalarField MatrixField::entry(int row, int col) const {
  ScalarField out(grid_);
  for (std::size_t n = 0; n < grid_.node_count(); ++n) out[n] = at(n, row, col);
  return out;
}

ScalarField MatrixField::trace() const {
  ScalarField out(grid_);
  for (std::size_t n = 0; n < grid_.node_count(); ++n)
    for (int a = 0; a < rank_; ++a) out[n] += at(n, a, a);
  return out;
}

double MatrixField::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double MatrixField::hermiticity_defect() const {
  double m = 0.0;
  for (std::size_t n = 0; n < grid_.node_count(); ++n)
    for (int a = 0; a < rank_; ++a)
      for (int b = 0; b < rank_; ++b) m = std::max(m, std::abs(at(n, a, b) - std::conj(at(n, b, a))));
  return m;
}

}  // namespace mirrorforge
