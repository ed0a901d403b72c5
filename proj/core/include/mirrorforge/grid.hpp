#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mirrorforge {

enum class DomainKind { PeriodicTorus, Box };

std::string to_string(DomainKind kind);

// Axis-aligned base region. Torus axes are periodic with period upper - lower.
class Domain {
 public:
  static constexpr int kMaxDimension = 4;

  static Domain torus(int dimension);
  static Domain torus(std::vector<double> lower, std::vector<double> period);
  static Domain box(std::vector<double> lower, std::vector<double> upper);

  DomainKind kind() const noexcept { return kind_; }
  bool periodic() const noexcept { return kind_ == DomainKind::PeriodicTorus; }
  int dimension() const noexcept { return static_cast<int>(lower_.size()); }
  double lower(int axis) const { return lower_.at(axis); }
  double upper(int axis) const { return upper_.at(axis); }
  double extent(int axis) const { return upper_.at(axis) - lower_.at(axis); }
  double volume() const;

  bool operator==(const Domain&) const = default;

 private:
  Domain(DomainKind kind, std::vector<double> lower, std::vector<double> upper);

  DomainKind kind_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Uniform node-centred grid. A periodic axis with resolution n has n nodes (index n is
// index 0); a box axis has n + 1 nodes including both ends. Axis 0 varies fastest.
class Grid {
 public:
  Grid(Domain domain, std::vector<int> resolution);
  Grid(Domain domain, int resolution);

  const Domain& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return domain_.dimension(); }
  bool periodic() const noexcept { return domain_.periodic(); }

  int resolution(int axis) const { return resolution_.at(axis); }
  const std::vector<int>& resolutions() const noexcept { return resolution_; }
  int count(int axis) const { return count_.at(axis); }
  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t stride(int axis) const { return stride_.at(axis); }
  double spacing(int axis) const { return spacing_.at(axis); }
  // Largest spacing; used as "h" in refinement studies.
  double max_spacing() const;

  int index(std::size_t node, int axis) const {
    return static_cast<int>((node / stride_[axis]) % static_cast<std::size_t>(count_[axis]));
  }
  double coordinate(std::size_t node, int axis) const {
    return domain_.lower(axis) + index(node, axis) * spacing_[axis];
  }
  void coordinates(std::size_t node, std::span<double> out) const;
  std::vector<double> coordinates(std::size_t node) const;

  // Node from a multi-index; periodic axes wrap, box axes must be in range.
  std::size_t node(std::span<const int> idx) const;
  // Neighbour along one axis; periodic axes wrap, box axes throw when leaving the box.
  std::size_t shift(std::size_t node, int axis, int offset) const;

  bool on_boundary(std::size_t node) const;
  // Distance (in nodes) to the nearest box face; large for periodic grids.
  int boundary_depth(std::size_t node) const;

  bool operator==(const Grid& other) const {
    return domain_ == other.domain_ && resolution_ == other.resolution_;
  }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  Domain domain_;
  std::vector<int> resolution_;
  std::vector<int> count_;
  std::vector<std::size_t> stride_;
  std::vector<double> spacing_;
  std::size_t nodes_ = 0;
};

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace mirrorforge
