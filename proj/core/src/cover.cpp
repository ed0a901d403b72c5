#include <algorithm>
#include <cmath>
#include <limits>

#include "mirrorforge/error.hpp"
#include "mirrorforge/special_cases.hpp"

namespace mirrorforge {

namespace {

double torus_distance(double d) {
  d -= std::round(d);
  return std::abs(d);
}

void require_flat(const SemiFlatGeometry& geo) {
  const int m = geo.dimension();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const ScalarField& h = geo.hessian(i, j);
      const Complex h0 = h[0];
      for (std::size_t n = 0; n < h.size(); ++n)
        if (std::abs(h[n] - h0) > 1e-10 * std::max(1.0, std::abs(h0)))
          throw InvalidArgument("multi-section cover needs a flat base metric (constant Hessian)");
    }
}

}  // namespace

CoverTransform multisection_cover_transform(std::shared_ptr<const SemiFlatGeometry> geometry,
                                            const std::vector<LiftedField>& sections, double theta,
                                            double collision_tolerance) {
  if (sections.empty()) throw InvalidArgument("multi-section cover needs at least one section");
  require_flat(*geometry);
  const int m = geometry->dimension();
  const Grid& grid = geometry->grid();

  std::vector<SectionCycle> cycles;
  cycles.reserve(sections.size());
  for (const auto& f : sections) cycles.emplace_back(geometry, f, theta);

  CoverTransform out;
  out.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < cycles.size(); ++s)
    for (std::size_t t = s + 1; t < cycles.size(); ++t) {
      for (std::size_t n = 0; n < grid.node_count(); ++n) {
        double d2 = 0.0;
        for (int j = 0; j < m; ++j) {
          const double d = torus_distance(cycles[s].section(j)[n].real() - cycles[t].section(j)[n].real());
          d2 += d * d;
        }
        const double d = std::sqrt(d2);
        out.min_separation = std::min(out.min_separation, d);
        if (d <= collision_tolerance)
          throw RamificationError("sheets " + std::to_string(s + 1) + " and " + std::to_string(t + 1) +
                                  " meet at node " + std::to_string(n) + "; ramified covers are not supported");
      }
    }

  auto dual = std::make_shared<const DualGeometry>(DualGeometry::build(*geometry));
  for (const auto& cycle : cycles) {
    MirrorConnection mc = fm_transform(cycle, ConnectionOnC::zero(grid, 1), dual);
    const double f02 = f02_residual(mc);
    const double dhym = dhym_residual(mc).max_abs();
    out.sheets.push_back({std::move(mc), f02, dhym});
  }
  return out;
}

}  // namespace mirrorforge
