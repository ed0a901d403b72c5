#include "mirrorforge/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>

#include "mirrorforge/derivative.hpp"
#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"
#include "mirrorforge/quadrature.hpp"

namespace mirrorforge {

namespace {

constexpr int kMaxSpace = 8;
const Complex kI(0.0, 1.0);

struct MaskTable {
  std::vector<AxisMask> masks;
  std::vector<int> position;  // indexed by mask, -1 if not of this degree
};

const MaskTable& mask_table(int D, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MaskTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{D, k}];
  if (!slot) {
    slot = std::make_unique<MaskTable>();
    slot->position.assign(std::size_t{1} << D, -1);
    // lexicographic order of the sorted index lists
    std::vector<AxisMask> all;
    for (AxisMask m = 0; m < (AxisMask{1} << D); ++m)
      if (std::popcount(m) == k) all.push_back(m);
    std::sort(all.begin(), all.end(), [](AxisMask a, AxisMask b) { return mask_axes(a) < mask_axes(b); });
    slot->masks = all;
    for (std::size_t i = 0; i < all.size(); ++i) slot->position[all[i]] = static_cast<int>(i);
  }
  return *slot;
}

// sign of moving the axes of b past those of a (a ^ b = sign * e_{a|b})
int shuffle_sign(AxisMask a, AxisMask b) {
  int inversions = 0;
  for (AxisMask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

// Matrix (or broadcast scalar) multiply-accumulate: c += s * a * b per node.
void accumulate_product(std::span<Complex> c, int rc, std::span<const Complex> a, int ra, std::span<const Complex> b,
                        int rb, Complex s, std::size_t nodes) {
  const std::size_t bc = static_cast<std::size_t>(rc) * rc;
  const std::size_t ba = static_cast<std::size_t>(ra) * ra;
  const std::size_t bb = static_cast<std::size_t>(rb) * rb;
  if (ra == 1 && rb == 1) {
    for (std::size_t n = 0; n < nodes; ++n) c[n] += s * a[n] * b[n];
    return;
  }
  for (std::size_t n = 0; n < nodes; ++n) {
    Complex* cn = c.data() + n * bc;
    const Complex* an = a.data() + n * ba;
    const Complex* bn = b.data() + n * bb;
    if (ra == 1) {
      for (std::size_t e = 0; e < bc; ++e) cn[e] += s * an[0] * bn[e];
    } else if (rb == 1) {
      for (std::size_t e = 0; e < bc; ++e) cn[e] += s * an[e] * bn[0];
    } else {
      for (int i = 0; i < rc; ++i)
        for (int k = 0; k < rc; ++k) {
          const Complex aik = s * an[i * rc + k];
          if (aik == Complex(0.0)) continue;
          for (int j = 0; j < rc; ++j) cn[i * rc + j] += aik * bn[k * rc + j];
        }
    }
  }
}

struct Term {
  int slot;
  Complex weight;
};
using Basis1 = std::vector<std::vector<Term>>;  // image of each source slot

// Images of the source basis 1-forms in the target basis.
Basis1 conversion(int D, const ComplexStructure& J, Frame from, Frame to) {
  Basis1 map(D);
  if (from == to) {
    for (int s = 0; s < D; ++s) map[s] = {{s, 1.0}};
    return map;
  }
  const int n = J.complex_dimension();
  if (from == Frame::Real) {
    for (int j = 0; j < n; ++j) {
      map[J.real_axis(j)] = {{j, 0.5}, {n + j, 0.5}};
      map[J.imaginary_axis(j)] = {{j, -0.5 * kI}, {n + j, 0.5 * kI}};
    }
  } else {
    for (int j = 0; j < n; ++j) {
      map[j] = {{J.real_axis(j), 1.0}, {J.imaginary_axis(j), kI}};
      map[n + j] = {{J.real_axis(j), 1.0}, {J.imaginary_axis(j), -kI}};
    }
  }
  return map;
}

}  // namespace

std::vector<int> mask_axes(AxisMask mask) {
  std::vector<int> axes;
  for (; mask; mask &= mask - 1) axes.push_back(std::countr_zero(mask));
  return axes;
}

AxisMask axes_mask(std::span<const int> axes) {
  AxisMask m = 0;
  for (int a : axes) m |= AxisMask{1} << a;
  return m;
}

ComplexStructure::ComplexStructure(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {}

ComplexStructure ComplexStructure::standard(int complex_dimension) {
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < complex_dimension; ++j) pairs.emplace_back(j, complex_dimension + j);
  return ComplexStructure(std::move(pairs));
}

void ComplexStructure::validate(int space_dimension) const {
  if (2 * complex_dimension() != space_dimension)
    throw InvalidArgument("complex structure does not pair all real axes");
  std::vector<int> seen(space_dimension, 0);
  for (const auto& [re, im] : pairs_) {
    if (re < 0 || im < 0 || re >= space_dimension || im >= space_dimension)
      throw InvalidArgument("complex structure axis out of range");
    if (seen[re]++ || seen[im]++) throw InvalidArgument("complex structure is not a perfect matching");
  }
}

DifferentialForm::DifferentialForm(Grid grid, int space_dimension, int degree, int rank, Frame frame,
                                   ComplexStructure structure)
    : grid_(std::move(grid)),
      space_dim_(space_dimension),
      degree_(degree),
      rank_(rank),
      frame_(frame),
      structure_(std::move(structure)) {
  if (space_dim_ < grid_.dimension() || space_dim_ > kMaxSpace)
    throw InvalidArgument("form space dimension must be between the grid dimension and 8");
  if (degree_ < 0 || degree_ > space_dim_) throw InvalidArgument("form degree exceeds the space dimension");
  if (rank_ < 1) throw InvalidArgument("form rank must be positive");
  if (structure_.empty() && space_dim_ % 2 == 0) structure_ = ComplexStructure::standard(space_dim_ / 2);
  if (frame_ == Frame::Holomorphic) structure_.validate(space_dim_);
  const auto& table = mask_table(space_dim_, degree_);
  data_.assign(table.masks.size(), std::vector<Complex>(grid_.node_count() * block()));
}

DifferentialForm DifferentialForm::function(const ScalarField& f, int space_dimension) {
  DifferentialForm out(f.grid(), space_dimension, 0);
  out.set_component(0, f);
  return out;
}

DifferentialForm DifferentialForm::function(const MatrixField& f, int space_dimension) {
  DifferentialForm out(f.grid(), space_dimension, 0, f.rank());
  out.set_component(0, f);
  return out;
}

DifferentialForm DifferentialForm::identity(const Grid& grid, int space_dimension, int rank) {
  return function(MatrixField::identity(grid, rank), space_dimension);
}

DifferentialForm DifferentialForm::monomial(const Grid& grid, int space_dimension, std::vector<int> slots,
                                            Complex coefficient, Frame frame, ComplexStructure structure) {
  DifferentialForm out(grid, space_dimension, static_cast<int>(slots.size()), 1, frame, std::move(structure));
  // sort with sign
  int sign = 1;
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (std::size_t j = 0; j + 1 < slots.size() - i; ++j)
      if (slots[j] > slots[j + 1]) {
        std::swap(slots[j], slots[j + 1]);
        sign = -sign;
      }
  for (std::size_t i = 0; i + 1 < slots.size(); ++i)
    if (slots[i] == slots[i + 1]) return out;
  for (int s : slots)
    if (s < 0 || s >= space_dimension) throw InvalidArgument("monomial slot out of range");
  auto coeffs = out.coefficients(axes_mask(slots));
  std::fill(coeffs.begin(), coeffs.end(), static_cast<double>(sign) * coefficient);
  return out;
}

DifferentialForm DifferentialForm::one_form(const std::vector<ScalarField>& coefficients, int space_dimension,
                                            Frame frame, ComplexStructure structure) {
  if (coefficients.empty()) throw InvalidArgument("one_form needs at least one coefficient");
  DifferentialForm out(coefficients.front().grid(), space_dimension, 1, 1, frame, std::move(structure));
  for (std::size_t a = 0; a < coefficients.size(); ++a) out.set_component(AxisMask{1} << a, coefficients[a]);
  return out;
}

const std::vector<AxisMask>& DifferentialForm::masks() const { return mask_table(space_dim_, degree_).masks; }

int DifferentialForm::position(AxisMask mask) const {
  const auto& table = mask_table(space_dim_, degree_);
  if (mask >= table.position.size() || table.position[mask] < 0)
    throw InvalidArgument("multi-index is not a component of this form");
  return table.position[mask];
}

bool DifferentialForm::is_component(AxisMask mask) const {
  const auto& table = mask_table(space_dim_, degree_);
  return mask < table.position.size() && table.position[mask] >= 0;
}

std::span<const Complex> DifferentialForm::coefficients(AxisMask mask) const { return data_[position(mask)]; }
std::span<Complex> DifferentialForm::coefficients(AxisMask mask) { return data_[position(mask)]; }

ScalarField DifferentialForm::component(AxisMask mask, int row, int col) const {
  const auto c = coefficients(mask);
  ScalarField out(grid_);
  for (std::size_t n = 0; n < grid_.node_count(); ++n) out[n] = c[n * block() + row * rank_ + col];
  return out;
}

MatrixField DifferentialForm::matrix_component(AxisMask mask) const {
  MatrixField out(grid_, rank_);
  const auto c = coefficients(mask);
  std::copy(c.begin(), c.end(), out.data().begin());
  return out;
}

void DifferentialForm::set_component(AxisMask mask, const ScalarField& value) {
  require_same_grid(grid_, value.grid(), "set_component");
  auto c = coefficients(mask);
  for (std::size_t n = 0; n < grid_.node_count(); ++n)
    for (int a = 0; a < rank_; ++a)
      for (int b = 0; b < rank_; ++b) c[n * block() + a * rank_ + b] = (a == b) ? value[n] : Complex(0.0);
}

void DifferentialForm::set_component(AxisMask mask, const MatrixField& value) {
  require_same_grid(grid_, value.grid(), "set_component");
  if (value.rank() != rank_) throw InvalidArgument("set_component: rank mismatch");
  auto c = coefficients(mask);
  std::copy(value.data().begin(), value.data().end(), c.begin());
}

void DifferentialForm::add_to_component(AxisMask mask, const ScalarField& value, Complex scale) {
  require_same_grid(grid_, value.grid(), "add_to_component");
  auto c = coefficients(mask);
  for (std::size_t n = 0; n < grid_.node_count(); ++n)
    for (int a = 0; a < rank_; ++a) c[n * block() + a * rank_ + a] += scale * value[n];
}

DifferentialForm DifferentialForm::to_frame(Frame frame) const { return to_frame(frame, structure_); }

DifferentialForm DifferentialForm::to_frame(Frame frame, const ComplexStructure& structure) const {
  if (frame == frame_ && structure == structure_) return *this;
  if (frame_ == Frame::Holomorphic && frame == Frame::Holomorphic)
    return to_frame(Frame::Real).to_frame(Frame::Holomorphic, structure);
  const ComplexStructure& J = (frame_ == Frame::Holomorphic) ? structure_ : structure;
  J.validate(space_dim_);
  const Basis1 map = conversion(space_dim_, J, frame_, frame);
  DifferentialForm out(grid_, space_dim_, degree_, rank_, frame, J);
  const auto& table = mask_table(space_dim_, degree_);
  const std::size_t len = grid_.node_count() * block();
  for (std::size_t p = 0; p < table.masks.size(); ++p) {
    const auto& src = data_[p];
    if (std::all_of(src.begin(), src.end(), [](Complex v) { return v == Complex(0.0); })) continue;
    const auto axes = mask_axes(table.masks[p]);
    const int k = static_cast<int>(axes.size());
    // expand the wedge of the images of each factor
    std::vector<int> choice(k, 0);
    for (;;) {
      Complex w = 1.0;
      AxisMask target = 0;
      int sign = 1;
      bool zero = false;
      for (int f = 0; f < k && !zero; ++f) {
        const Term& t = map[axes[f]][choice[f]];
        const AxisMask bit = AxisMask{1} << t.slot;
        if (target & bit) {
          zero = true;
          break;
        }
        sign *= shuffle_sign(target, bit);
        target |= bit;
        w *= t.weight;
      }
      if (!zero) {
        auto& dst = out.data_[table.position[target]];
        const Complex s = static_cast<double>(sign) * w;
        for (std::size_t i = 0; i < len; ++i) dst[i] += s * src[i];
      }
      int f = 0;
      while (f < k && ++choice[f] == static_cast<int>(map[axes[f]].size())) choice[f++] = 0;
      if (f == k) break;
    }
  }
  return out;
}

DifferentialForm DifferentialForm::conj() const {
  DifferentialForm real = to_frame(Frame::Real);
  for (auto& comp : real.data_)
    for (auto& v : comp) v = std::conj(v);
  return real.to_frame(frame_, structure_);
}

DifferentialForm DifferentialForm::trace() const {
  DifferentialForm out(grid_, space_dim_, degree_, 1, frame_, structure_);
  for (std::size_t p = 0; p < data_.size(); ++p)
    for (std::size_t n = 0; n < grid_.node_count(); ++n)
      for (int a = 0; a < rank_; ++a) out.data_[p][n] += data_[p][n * block() + a * rank_ + a];
  return out;
}

double DifferentialForm::max_abs() const {
  double m = 0.0;
  for (const auto& comp : data_)
    for (const auto& v : comp) m = std::max(m, std::abs(v));
  return m;
}

double DifferentialForm::max_abs(int min_depth) const {
  if (grid_.periodic() || min_depth <= 0) return max_abs();
  const std::size_t b = block();
  double m = 0.0;
  for (std::size_t n = 0; n < grid_.node_count(); ++n) {
    if (grid_.boundary_depth(n) < min_depth) continue;
    for (const auto& comp : data_)
      for (std::size_t k = 0; k < b; ++k) m = std::max(m, std::abs(comp[n * b + k]));
  }
  return m;
}

namespace {

void require_compatible(const DifferentialForm& a, const DifferentialForm& b, const char* where) {
  require_same_grid(a.grid(), b.grid(), where);
  if (a.space_dimension() != b.space_dimension())
    throw InvalidArgument(std::string(where) + ": space dimension mismatch");
}

}  // namespace

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& other) {
  require_compatible(*this, other, "form addition");
  if (degree_ != other.degree_) throw InvalidArgument("form addition: degree mismatch");
  if (rank_ != other.rank_) throw InvalidArgument("form addition: rank mismatch");
  const DifferentialForm& rhs = other;
  if (rhs.frame_ != frame_ || !(rhs.structure_ == structure_)) {
    if (frame_ != Frame::Real) *this = to_frame(Frame::Real);
    DifferentialForm conv = rhs.to_frame(Frame::Real);
    for (std::size_t p = 0; p < data_.size(); ++p)
      for (std::size_t i = 0; i < data_[p].size(); ++i) data_[p][i] += conv.data_[p][i];
    return *this;
  }
  for (std::size_t p = 0; p < data_.size(); ++p)
    for (std::size_t i = 0; i < data_[p].size(); ++i) data_[p][i] += rhs.data_[p][i];
  return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& other) {
  DifferentialForm neg = other;
  neg *= -1.0;
  return *this += neg;
}

DifferentialForm& DifferentialForm::operator*=(Complex s) {
  for (auto& comp : data_)
    for (auto& v : comp) v *= s;
  return *this;
}

DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
DifferentialForm operator*(Complex s, DifferentialForm a) { return a *= s; }

DifferentialForm scale(const DifferentialForm& a, const ScalarField& f) {
  require_same_grid(a.grid(), f.grid(), "scale");
  DifferentialForm out = a;
  const std::size_t b = static_cast<std::size_t>(a.rank()) * a.rank();
  for (AxisMask mask : out.masks()) {
    auto c = out.coefficients(mask);
    for (std::size_t n = 0; n < a.grid().node_count(); ++n)
      for (std::size_t e = 0; e < b; ++e) c[n * b + e] *= f[n];
  }
  return out;
}

DifferentialForm wedge(const DifferentialForm& a_in, const DifferentialForm& b_in) {
  require_compatible(a_in, b_in, "wedge");
  if (a_in.degree() + b_in.degree() > a_in.space_dimension()) throw InvalidArgument("wedge: degree overflow");
  if (a_in.rank() != b_in.rank() && a_in.rank() != 1 && b_in.rank() != 1)
    throw InvalidArgument("wedge: incompatible matrix ranks");
  const bool same = a_in.frame() == b_in.frame() && a_in.complex_structure() == b_in.complex_structure();
  const DifferentialForm a = same ? a_in : a_in.to_frame(Frame::Real);
  const DifferentialForm b = same ? b_in : b_in.to_frame(Frame::Real);
  const int rank = std::max(a.rank(), b.rank());
  DifferentialForm out(a.grid(), a.space_dimension(), a.degree() + b.degree(), rank, a.frame(),
                       a.complex_structure());
  const std::size_t nodes = a.grid().node_count();
  for (AxisMask I : a.masks()) {
    const auto ca = a.coefficients(I);
    if (std::all_of(ca.begin(), ca.end(), [](Complex v) { return v == Complex(0.0); })) continue;
    for (AxisMask J : b.masks()) {
      if (I & J) continue;
      const auto cb = b.coefficients(J);
      accumulate_product(out.coefficients(I | J), rank, ca, a.rank(), cb, b.rank(), shuffle_sign(I, J), nodes);
    }
  }
  return out;
}

DifferentialForm wedge_symmetrized(const std::vector<DifferentialForm>& factors) {
  if (factors.empty()) throw InvalidArgument("wedge_symmetrized needs at least one factor");
  const int k = static_cast<int>(factors.size());
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  bool all_scalar = true;
  for (const auto& f : factors) all_scalar = all_scalar && f.rank() == 1;
  if (all_scalar || k == 1) {
    DifferentialForm acc = factors[0];
    for (int i = 1; i < k; ++i) acc = wedge(acc, factors[i]);
    return acc;
  }
  std::optional<DifferentialForm> sum;
  double count = 0.0;
  do {
    int sign = 1;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (order[i] > order[j] && (factors[order[i]].degree() * factors[order[j]].degree()) % 2) sign = -sign;
    DifferentialForm acc = factors[order[0]];
    for (int i = 1; i < k; ++i) acc = wedge(acc, factors[order[i]]);
    acc *= static_cast<double>(sign);
    if (sum) *sum += acc;
    else sum = std::move(acc);
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  *sum *= 1.0 / count;
  return *sum;
}

DifferentialForm wedge_power(const DifferentialForm& a, int k) {
  if (k < 0) throw InvalidArgument("wedge_power: negative exponent");
  DifferentialForm acc = DifferentialForm::identity(a.grid(), a.space_dimension(), a.rank());
  if (a.frame() == Frame::Holomorphic) acc = acc.to_frame(Frame::Holomorphic, a.complex_structure());
  for (int i = 0; i < k; ++i) acc = wedge(acc, a);
  return acc;
}

DifferentialForm exterior_derivative(const DifferentialForm& in) {
  if (in.degree() >= in.space_dimension()) throw InvalidArgument("exterior_derivative: degree must be below D");
  if (in.frame() != Frame::Real)
    return exterior_derivative(in.to_frame(Frame::Real)).to_frame(in.frame(), in.complex_structure());
  const Grid& grid = in.grid();
  const int m = grid.dimension();
  const std::size_t blk = static_cast<std::size_t>(in.rank()) * in.rank();
  DifferentialForm out(grid, in.space_dimension(), in.degree() + 1, in.rank(), Frame::Real, in.complex_structure());
  for (AxisMask I : in.masks()) {
    const auto c = in.coefficients(I);
    if (std::all_of(c.begin(), c.end(), [](Complex v) { return v == Complex(0.0); })) continue;
    for (int a = 0; a < m; ++a) {
      const AxisMask bit = AxisMask{1} << a;
      if (I & bit) continue;
      const double sign = (std::popcount(I & (bit - 1)) % 2) ? -1.0 : 1.0;
      auto dst = out.coefficients(I | bit);
      parallel_for(grid.node_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
          const Stencil st = first_derivative_stencil(grid, n, a);
          for (std::size_t e = 0; e < blk; ++e) {
            Complex s = 0.0;
            for (const auto& t : st) s += t.weight * c[t.node * blk + e];
            dst[n * blk + e] += sign * s;
          }
        }
      });
    }
  }
  return out;
}

std::map<std::pair<int, int>, DifferentialForm> decompose_pq(const DifferentialForm& a, const ComplexStructure& J) {
  if (a.space_dimension() % 2) throw InvalidArgument("decompose_pq: space dimension must be even");
  J.validate(a.space_dimension());
  const DifferentialForm hol = a.to_frame(Frame::Holomorphic, J);
  const int n = J.complex_dimension();
  const AxisMask holo_bits = (AxisMask{1} << n) - 1;
  std::map<std::pair<int, int>, DifferentialForm> parts;
  for (int p = 0; p <= std::min(a.degree(), n); ++p) {
    const int q = a.degree() - p;
    if (q > n) continue;
    DifferentialForm part(a.grid(), a.space_dimension(), a.degree(), a.rank(), Frame::Holomorphic, J);
    for (AxisMask mask : hol.masks()) {
      if (std::popcount(mask & holo_bits) != p) continue;
      const auto src = hol.coefficients(mask);
      std::copy(src.begin(), src.end(), part.coefficients(mask).begin());
    }
    parts.emplace(std::make_pair(p, q), std::move(part));
  }
  return parts;
}

DifferentialForm type_component(const DifferentialForm& a, const ComplexStructure& J, int p, int q) {
  if (p + q != a.degree()) throw InvalidArgument("type_component: p + q must equal the degree");
  auto parts = decompose_pq(a, J);
  auto it = parts.find({p, q});
  if (it == parts.end()) return DifferentialForm(a.grid(), a.space_dimension(), a.degree(), a.rank(), Frame::Holomorphic, J);
  return it->second;
}

ScalarField top_coefficient(const DifferentialForm& a) {
  if (a.degree() != a.space_dimension()) throw InvalidArgument("top_coefficient: form is not of top degree");
  const DifferentialForm real = a.to_frame(Frame::Real).trace();
  return real.component((AxisMask{1} << a.space_dimension()) - 1);
}

Complex integrate_top(const DifferentialForm& a) {
  // invariant axes have unit period, so they contribute a factor 1
  return integrate(top_coefficient(a));
}

DifferentialForm fiber_integrate(const DifferentialForm& a) {
  const int m = a.sampled_dimension();
  const int D = a.space_dimension();
  const int fiber = D - m;
  if (a.degree() < fiber) throw InvalidArgument("fiber_integrate: degree below fiber dimension");
  const DifferentialForm real = a.to_frame(Frame::Real);
  const AxisMask fiber_bits = ((AxisMask{1} << D) - 1) & ~((AxisMask{1} << m) - 1);
  DifferentialForm out(a.grid(), m, a.degree() - fiber, a.rank());
  for (AxisMask mask : real.masks()) {
    if ((mask & fiber_bits) != fiber_bits) continue;
    const auto src = real.coefficients(mask);
    auto dst = out.coefficients(mask & ~fiber_bits);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

DifferentialForm hodge_star(const DifferentialForm& a_in, const std::vector<ScalarField>& metric) {
  const int m = a_in.sampled_dimension();
  if (a_in.space_dimension() != m) throw InvalidArgument("hodge_star: form has invariant axes");
  if (metric.size() != static_cast<std::size_t>(m * m)) throw InvalidArgument("hodge_star: metric needs m*m fields");
  const DifferentialForm a = a_in.to_frame(Frame::Real);
  const int k = a.degree();
  const std::size_t blk = static_cast<std::size_t>(a.rank()) * a.rank();
  DifferentialForm out(a.grid(), m, m - k, a.rank());
  const auto& src_masks = a.masks();
  const AxisMask full = (AxisMask{1} << m) - 1;
  const std::size_t nc = src_masks.size();
  std::vector<std::vector<int>> axes(nc);
  for (std::size_t i = 0; i < nc; ++i) axes[i] = mask_axes(src_masks[i]);
  std::vector<std::span<const Complex>> src(nc);
  std::vector<std::span<Complex>> dst(nc);
  std::vector<double> sign(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    src[i] = a.coefficients(src_masks[i]);
    dst[i] = out.coefficients(full & ~src_masks[i]);
    sign[i] = shuffle_sign(src_masks[i], full & ~src_masks[i]);
  }
  parallel_for(a.grid().node_count(), [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXd G(m, m), compound(nc, nc);
    for (std::size_t n = begin; n < end; ++n) {
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) G(i, j) = metric[i * m + j][n].real();
      const double det = G.determinant();
      if (!(det > 0.0)) throw InvalidArgument("hodge_star: metric is not positive definite");
      const Eigen::MatrixXd Ginv = G.inverse();
      for (std::size_t I = 0; I < nc; ++I)
        for (std::size_t J = 0; J < nc; ++J) {
          if (k == 0) {
            compound(I, J) = 1.0;
            continue;
          }
          Eigen::MatrixXd sub(k, k);
          for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub(r, c) = Ginv(axes[I][r], axes[J][c]);
          compound(I, J) = sub.determinant();
        }
      const double vol = std::sqrt(det);
      for (std::size_t I = 0; I < nc; ++I)
        for (std::size_t e = 0; e < blk; ++e) {
          Complex raised = 0.0;
          for (std::size_t J = 0; J < nc; ++J) raised += compound(I, J) * src[J][n * blk + e];
          dst[I][n * blk + e] = vol * sign[I] * raised;
        }
    }
  });
  return out;
}

}  // namespace mirrorforge
