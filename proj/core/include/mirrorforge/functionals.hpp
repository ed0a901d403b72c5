#pragma once

#include <complex>
#include <vector>

#include "mirrorforge/transform.hpp"

namespace mirrorforge {

// CS_hol = kappa_cs * CS for the transform (m = 3, unit fibre volume).
inline const Complex kKappaCS{0.0, 1.0};
// _BOmega(transformed tuple) = kappa_moduli * _AOmega(tuple).
inline const Complex kKappaModuli{1.0, 0.0};

struct CSReport {
  Complex cs_value;
  Complex cs_hol_value;
  Complex kappa = kKappaCS;
  double relative_mismatch = 0.0;  // |cs_hol - kappa cs| / max(|cs_hol|, eps)
};

// int_C Tr(a ^ da + 2/3 a ^ a ^ a); closed three-dimensional base only.
Complex chern_simons(const ConnectionOnC& connection);
Complex chern_simons(const DifferentialForm& a);

// int_W Tr Omega~ ^ (B ^ (dbar B + A_0^{0,1} ^ B) + 2/3 B ^ B ^ B) for a (0,1)-form B.
Complex holomorphic_chern_simons(const DifferentialForm& B, const MirrorConnection& background);

// B = (A - A_0)^{0,1} of the transform.
DifferentialForm mirror_deformation(const MirrorConnection& mc);

CSReport cs_equality_report(const SectionCycle& cycle, const ConnectionOnC& connection,
                            std::shared_ptr<const DualGeometry> dual);

// int_C Tr tau_1 ^ ... ^ tau_m for complex one-forms tau_a = eta_a + i mu_a on C.
Complex a_moduli_m_form(const std::vector<DifferentialForm>& tuple);
// int_W Omega~ ^ Tr [dA_1 ^ ... ^ dA_m]_sym for (0,1)-forms on W.
Complex b_moduli_m_form(const std::vector<DifferentialForm>& tuple, const DualGeometry& dual);

// Tangent vector eta + i mu (eta: connection direction, mu: geometry direction) to the
// B-side variation (i eta_k phi^{kj} dx~_j + i mu_k phi^{kj} dy~_j)^{0,1}.
DifferentialForm moduli_tangent_transform(const DifferentialForm& eta, const DifferentialForm& mu,
                                          const DualGeometry& dual);

}  // namespace mirrorforge
