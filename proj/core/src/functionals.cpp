#include "mirrorforge/functionals.hpp"

#include <cmath>
#include <limits>

#include "mirrorforge/error.hpp"

namespace mirrorforge {

namespace {

const Complex kI(0.0, 1.0);

DifferentialForm cs_density(const DifferentialForm& a) {
  DifferentialForm out = wedge(a, exterior_derivative(a));
  DifferentialForm cubic = wedge(wedge(a, a), a);
  cubic *= 2.0 / 3.0;
  out += cubic;
  return out;
}

}  // namespace

Complex chern_simons(const DifferentialForm& a) {
  if (a.space_dimension() != 3 || a.sampled_dimension() != 3 || a.degree() != 1)
    throw InvalidArgument("chern_simons needs a one-form on a three-dimensional base");
  if (!a.grid().periodic())
    throw InvalidArgument("chern_simons needs a closed (periodic) base; boxes need boundary terms");
  return integrate_top(cs_density(a));
}

Complex chern_simons(const ConnectionOnC& connection) { return chern_simons(connection.form()); }

DifferentialForm mirror_deformation(const MirrorConnection& mc) {
  const DifferentialForm rest = mc.form().to_frame(Frame::Real) - mc.background();
  return type_component(rest, mc.dual().complex_structure(), 0, 1);
}

Complex holomorphic_chern_simons(const DifferentialForm& B, const MirrorConnection& background) {
  const int m = background.dimension();
  if (m != 3) throw InvalidArgument("holomorphic_chern_simons needs m = 3");
  if (B.degree() != 1 || B.space_dimension() != 2 * m)
    throw InvalidArgument("holomorphic_chern_simons: B must be a one-form on W");
  const auto J = background.dual().complex_structure();
  const DifferentialForm Bh = B.to_frame(Frame::Holomorphic, J);
  const DifferentialForm A0 = type_component(background.background(), J, 0, 1);
  DifferentialForm twisted = type_component(exterior_derivative(Bh), J, 0, 2);
  twisted += wedge(A0, Bh);
  DifferentialForm inner = wedge(Bh, twisted);
  DifferentialForm cubic = wedge(wedge(Bh, Bh), Bh);
  cubic *= 2.0 / 3.0;
  inner += cubic;
  return integrate_top(wedge(background.dual().holomorphic_volume(), inner));
}

CSReport cs_equality_report(const SectionCycle& cycle, const ConnectionOnC& connection,
                            std::shared_ptr<const DualGeometry> dual) {
  if (cycle.dimension() != 3) throw InvalidArgument("cs_equality_report needs m = 3");
  const MirrorConnection mc = fm_transform(cycle, connection, std::move(dual));
  CSReport r;
  r.cs_value = chern_simons(connection);
  r.cs_hol_value = holomorphic_chern_simons(mirror_deformation(mc), mc);
  r.relative_mismatch = std::abs(r.cs_hol_value - r.kappa * r.cs_value) /
                        std::max(std::abs(r.cs_hol_value), std::numeric_limits<double>::min());
  return r;
}

Complex a_moduli_m_form(const std::vector<DifferentialForm>& tuple) {
  if (tuple.empty()) throw InvalidArgument("a_moduli_m_form: empty tuple");
  const int m = tuple.front().space_dimension();
  if (static_cast<int>(tuple.size()) != m) throw InvalidArgument("a_moduli_m_form: tuple length must equal m");
  for (const auto& t : tuple)
    if (t.degree() != 1) throw InvalidArgument("a_moduli_m_form: entries must be one-forms");
  DifferentialForm acc = tuple[0];
  for (int i = 1; i < m; ++i) acc = wedge(acc, tuple[i]);
  return integrate_top(acc);
}

Complex b_moduli_m_form(const std::vector<DifferentialForm>& tuple, const DualGeometry& dual) {
  const int m = dual.dimension();
  if (static_cast<int>(tuple.size()) != m) throw InvalidArgument("b_moduli_m_form: tuple length must equal m");
  const auto J = dual.complex_structure();
  std::vector<DifferentialForm> factors;
  for (const auto& t : tuple) {
    if (t.degree() != 1 || t.space_dimension() != 2 * m)
      throw InvalidArgument("b_moduli_m_form: entries must be one-forms on W");
    const DifferentialForm h = t.to_frame(Frame::Holomorphic, J);
    if ((h - type_component(h, J, 0, 1)).max_abs() > 1e-12 * std::max(1.0, h.max_abs()))
      throw InvalidArgument("b_moduli_m_form: entries must be of type (0,1)");
    factors.push_back(h);
  }
  return integrate_top(wedge(dual.holomorphic_volume(), wedge_symmetrized(factors)));
}

DifferentialForm moduli_tangent_transform(const DifferentialForm& eta, const DifferentialForm& mu,
                                          const DualGeometry& dual) {
  // (i eta_k phi^{kj} dx~_j)^{0,1} = i Psi(eta) and (i mu_k phi^{kj} dy~_j)^{0,1} = Phi(mu).
  DifferentialForm out = transform_form(eta, FormTransform::Psi, dual);
  out *= kI;
  out += transform_form(mu, FormTransform::Phi, dual);
  return out;
}

}  // namespace mirrorforge
