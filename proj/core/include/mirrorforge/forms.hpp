#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "mirrorforge/field.hpp"

namespace mirrorforge {

// Bit i set means basis direction i is in the multi-index.
using AxisMask = std::uint32_t;

enum class Frame { Real, Holomorphic };

// Pairs (real axis, imaginary axis): z_j = x_{pair.first} + i x_{pair.second}.
class ComplexStructure {
 public:
  ComplexStructure() = default;
  explicit ComplexStructure(std::vector<std::pair<int, int>> pairs);
  // z_j = x_j + i x_{n+j}
  static ComplexStructure standard(int complex_dimension);

  bool empty() const noexcept { return pairs_.empty(); }
  int complex_dimension() const noexcept { return static_cast<int>(pairs_.size()); }
  int real_axis(int j) const { return pairs_.at(j).first; }
  int imaginary_axis(int j) const { return pairs_.at(j).second; }
  void validate(int space_dimension) const;
  bool operator==(const ComplexStructure&) const = default;

 private:
  std::vector<std::pair<int, int>> pairs_;
};

std::vector<int> mask_axes(AxisMask mask);
AxisMask axes_mask(std::span<const int> axes);

// Complex k-form on a D-dimensional space whose first grid.dimension() axes are sampled
// and whose remaining axes are invariant directions of unit period (coefficients do
// not depend on them). In the holomorphic frame basis slot j is dz_j and slot n + j
// is dz-bar_j. Coefficients are r x r matrices per node when rank > 1.
class DifferentialForm {
 public:
  DifferentialForm(Grid grid, int space_dimension, int degree, int rank = 1, Frame frame = Frame::Real,
                   ComplexStructure structure = {});

  static DifferentialForm function(const ScalarField& f, int space_dimension);
  static DifferentialForm function(const MatrixField& f, int space_dimension);
  static DifferentialForm identity(const Grid& grid, int space_dimension, int rank);
  // Constant-coefficient monomial coefficient * e_{s1} ^ ... ^ e_{sk}; slots may be unsorted.
  static DifferentialForm monomial(const Grid& grid, int space_dimension, std::vector<int> slots,
                                   Complex coefficient = 1.0, Frame frame = Frame::Real,
                                   ComplexStructure structure = {});
  // sum_a c_a e_a over the given coefficient list (a = 0..size-1).
  static DifferentialForm one_form(const std::vector<ScalarField>& coefficients, int space_dimension,
                                   Frame frame = Frame::Real, ComplexStructure structure = {});

  const Grid& grid() const noexcept { return grid_; }
  int space_dimension() const noexcept { return space_dim_; }
  int sampled_dimension() const noexcept { return grid_.dimension(); }
  int degree() const noexcept { return degree_; }
  int rank() const noexcept { return rank_; }
  Frame frame() const noexcept { return frame_; }
  const ComplexStructure& complex_structure() const noexcept { return structure_; }

  const std::vector<AxisMask>& masks() const;
  bool is_component(AxisMask mask) const;
  std::span<const Complex> coefficients(AxisMask mask) const;
  std::span<Complex> coefficients(AxisMask mask);
  ScalarField component(AxisMask mask, int row = 0, int col = 0) const;
  MatrixField matrix_component(AxisMask mask) const;
  void set_component(AxisMask mask, const ScalarField& value);
  void set_component(AxisMask mask, const MatrixField& value);
  void add_to_component(AxisMask mask, const ScalarField& value, Complex scale = 1.0);

  DifferentialForm to_frame(Frame frame) const;
  DifferentialForm to_frame(Frame frame, const ComplexStructure& structure) const;
  // Entry-wise complex conjugate of the form (dz and dz-bar swap in the holomorphic frame).
  DifferentialForm conj() const;
  // Trace of matrix coefficients, rank 1 result.
  DifferentialForm trace() const;

  double max_abs() const;
  // Max over nodes with grid boundary_depth >= min_depth (all nodes on a torus).
  double max_abs(int min_depth) const;

  DifferentialForm& operator+=(const DifferentialForm& other);
  DifferentialForm& operator-=(const DifferentialForm& other);
  DifferentialForm& operator*=(Complex s);

 private:
  std::size_t block() const { return static_cast<std::size_t>(rank_) * rank_; }
  int position(AxisMask mask) const;

  Grid grid_;
  int space_dim_;
  int degree_;
  int rank_;
  Frame frame_;
  ComplexStructure structure_;
  std::vector<std::vector<Complex>> data_;
};

DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b);
DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b);
DifferentialForm operator*(Complex s, DifferentialForm a);
// Pointwise product with a scalar function.
DifferentialForm scale(const DifferentialForm& a, const ScalarField& f);

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
// (1/k!) sum over orderings with Koszul signs; equals the ordered wedge for commuting coefficients.
DifferentialForm wedge_symmetrized(const std::vector<DifferentialForm>& factors);
// a ^ a ^ ... (k factors); k = 0 gives the identity 0-form.
DifferentialForm wedge_power(const DifferentialForm& a, int k);

DifferentialForm exterior_derivative(const DifferentialForm& a);

// (p,q) components in the holomorphic frame of J; they sum to the input.
std::map<std::pair<int, int>, DifferentialForm> decompose_pq(const DifferentialForm& a, const ComplexStructure& J);
DifferentialForm type_component(const DifferentialForm& a, const ComplexStructure& J, int p, int q);

// Coefficient of e_1 ^ ... ^ e_D in the real frame (traced when rank > 1).
ScalarField top_coefficient(const DifferentialForm& a);
Complex integrate_top(const DifferentialForm& a);

// Integrates out the invariant axes: keeps components containing all of them and strips
// them (they are last in the axis order). The result lives on the sampled axes only.
DifferentialForm fiber_integrate(const DifferentialForm& a);

// Hodge star for a form on the sampled space (no invariant axes) with metric G given as
// m*m real fields, orientation e_1 ^ ... ^ e_m.
DifferentialForm hodge_star(const DifferentialForm& a, const std::vector<ScalarField>& metric);

}  // namespace mirrorforge
