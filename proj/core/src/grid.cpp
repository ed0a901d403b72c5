#include "mirrorforge/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

std::string to_string(DomainKind kind) {
  return kind == DomainKind::PeriodicTorus ? "torus" : "box";
}

Domain::Domain(DomainKind kind, std::vector<double> lower, std::vector<double> upper)
    : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {
  const int m = static_cast<int>(lower_.size());
  if (m < 1 || m > kMaxDimension) throw InvalidArgument("domain dimension must be in 1..4");
  if (upper_.size() != lower_.size()) throw InvalidArgument("domain bounds have different lengths");
  for (int i = 0; i < m; ++i) {
    if (!(upper_[i] > lower_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
      throw InvalidArgument("domain axis " + std::to_string(i) + " has an empty extent");
  }
}

Domain Domain::torus(int dimension) {
  if (dimension < 1 || dimension > kMaxDimension) throw InvalidArgument("domain dimension must be in 1..4");
  return Domain(DomainKind::PeriodicTorus, std::vector<double>(dimension, 0.0),
                std::vector<double>(dimension, 1.0));
}

Domain Domain::torus(std::vector<double> lower, std::vector<double> period) {
  std::vector<double> upper(lower.size());
  if (period.size() != lower.size()) throw InvalidArgument("torus bounds have different lengths");
  for (std::size_t i = 0; i < lower.size(); ++i) upper[i] = lower[i] + period[i];
  return Domain(DomainKind::PeriodicTorus, std::move(lower), std::move(upper));
}

Domain Domain::box(std::vector<double> lower, std::vector<double> upper) {
  return Domain(DomainKind::Box, std::move(lower), std::move(upper));
}

double Domain::volume() const {
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) v *= extent(i);
  return v;
}

Grid::Grid(Domain domain, std::vector<int> resolution)
    : domain_(std::move(domain)), resolution_(std::move(resolution)) {
  const int m = domain_.dimension();
  if (static_cast<int>(resolution_.size()) != m)
    throw InvalidArgument("grid resolution count does not match domain dimension");
  count_.resize(m);
  stride_.resize(m);
  spacing_.resize(m);
  std::size_t stride = 1;
  for (int i = 0; i < m; ++i) {
    if (resolution_[i] < 4) throw InvalidArgument("grid resolution must be at least 4 per axis");
    count_[i] = domain_.periodic() ? resolution_[i] : resolution_[i] + 1;
    spacing_[i] = domain_.extent(i) / resolution_[i];
    stride_[i] = stride;
    stride *= static_cast<std::size_t>(count_[i]);
  }
  nodes_ = stride;
}

Grid::Grid(Domain domain, int resolution)
    : Grid(domain, std::vector<int>(static_cast<std::size_t>(domain.dimension()), resolution)) {}

double Grid::max_spacing() const { return *std::max_element(spacing_.begin(), spacing_.end()); }

void Grid::coordinates(std::size_t node, std::span<double> out) const {
  for (int i = 0; i < dimension(); ++i) out[i] = coordinate(node, i);
}

std::vector<double> Grid::coordinates(std::size_t node) const {
  std::vector<double> x(dimension());
  coordinates(node, x);
  return x;
}

std::size_t Grid::node(std::span<const int> idx) const {
  std::size_t n = 0;
  for (int i = 0; i < dimension(); ++i) {
    int k = idx[i];
    if (periodic()) {
      k %= count_[i];
      if (k < 0) k += count_[i];
    } else if (k < 0 || k >= count_[i]) {
      throw InvalidArgument("grid index out of range");
    }
    n += static_cast<std::size_t>(k) * stride_[i];
  }
  return n;
}

std::size_t Grid::shift(std::size_t node, int axis, int offset) const {
  const int k = index(node, axis);
  int j = k + offset;
  if (periodic()) {
    j %= count_[axis];
    if (j < 0) j += count_[axis];
  } else if (j < 0 || j >= count_[axis]) {
    throw InvalidArgument("stencil leaves the box");
  }
  return node + (static_cast<std::ptrdiff_t>(j) - k) * static_cast<std::ptrdiff_t>(stride_[axis]);
}

bool Grid::on_boundary(std::size_t node) const { return boundary_depth(node) == 0; }

int Grid::boundary_depth(std::size_t node) const {
  if (periodic()) return std::numeric_limits<int>::max();
  int depth = std::numeric_limits<int>::max();
  for (int i = 0; i < dimension(); ++i) {
    const int k = index(node, i);
    depth = std::min({depth, k, count_[i] - 1 - k});
  }
  return depth;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw InvalidArgument(std::string(where) + ": grid mismatch");
}

}  // namespace mirrorforge
