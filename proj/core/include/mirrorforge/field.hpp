#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mirrorforge/grid.hpp"

namespace mirrorforge {

using Complex = std::complex<double>;

// Complex sample per grid node. Realness is a checked property, not a type.
class ScalarField {
 public:
  explicit ScalarField(Grid grid, std::string label = {});
  ScalarField(Grid grid, std::vector<Complex> values, std::string label = {});

  static ScalarField constant(const Grid& grid, Complex value, std::string label = {});
  static ScalarField from_function(const Grid& grid, const std::function<Complex(std::span<const double>)>& fn,
                                   std::string label = {});

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  bool is_real(double tolerance = 0.0) const;
  double max_abs() const;
  double max_imag() const;
  Complex mean() const;

  ScalarField real_part() const;
  ScalarField imag_part() const;
  ScalarField conj() const;
  ScalarField map(const std::function<Complex(Complex)>& fn) const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(const ScalarField& other);
  ScalarField& operator*=(Complex s);
  ScalarField& operator+=(Complex s);

 private:
  Grid grid_;
  std::vector<Complex> values_;
  std::string label_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(Complex s, ScalarField a);
ScalarField operator-(ScalarField a);

// r x r complex matrix per node, node-major then row-major.
class MatrixField {
 public:
  MatrixField(Grid grid, int rank);
  MatrixField(const ScalarField& scalar);  // rank 1 view copy

  static MatrixField identity(const Grid& grid, int rank);
  // Entry-wise assembly from r*r scalar fields (row-major).
  static MatrixField from_entries(const std::vector<ScalarField>& entries, int rank);

  const Grid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }
  Complex& at(std::size_t node, int row, int col) {
    return data_[(node * rank_ + row) * rank_ + col];
  }
  Complex at(std::size_t node, int row, int col) const {
    return data_[(node * rank_ + row) * rank_ + col];
  }
  ScalarField entry(int row, int col) const;
  ScalarField trace() const;
  double max_abs() const;
  // max over nodes of |M - M^dagger|
  double hermiticity_defect() const;

 private:
  Grid grid_;
  int rank_;
  std::vector<Complex> data_;
};

}  // namespace mirrorforge
