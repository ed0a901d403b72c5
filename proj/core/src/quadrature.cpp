#include "mirrorforge/quadrature.hpp"

#include <vector>

#include "mirrorforge/error.hpp"
#include "mirrorforge/parallel.hpp"

namespace mirrorforge {

double quadrature_weight(const Grid& grid, std::size_t node) {
  double w = 1.0;
  for (int a = 0; a < grid.dimension(); ++a) {
    double wa = grid.spacing(a);
    if (!grid.periodic()) {
      const int k = grid.index(node, a);
      if (k == 0 || k == grid.count(a) - 1) wa *= 0.5;
    }
    w *= wa;
  }
  return w;
}

Complex integrate(const Grid& grid, std::span<const Complex> values) {
  if (values.size() != grid.node_count()) throw InvalidArgument("integrate: value count does not match grid");
  std::vector<Complex> weighted(values.size());
  for (std::size_t n = 0; n < values.size(); ++n) weighted[n] = quadrature_weight(grid, n) * values[n];
  return pairwise_sum(std::span<const Complex>(weighted));
}

Complex integrate(const ScalarField& field) { return integrate(field.grid(), field.values()); }

}  // namespace mirrorforge
