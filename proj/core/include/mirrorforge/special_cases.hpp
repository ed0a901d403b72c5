#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "mirrorforge/transform.hpp"

namespace mirrorforge {

using Rational = boost::rational<std::int64_t>;

// "p/q", an integer, or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

// Exact complex number with rational parts.
struct ExactComplex {
  Rational re{0}, im{0};
  bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }
};

// C = C_B x C_F in the flat T^6 with
//   C_B = {x = (1,a,b) x^1 + (0,alpha,beta)},  C_F = {y . (1,a,b) = gamma}
// and D_A = d + i(gamma~ dx^1 + alpha~ dy^2 + beta~ dy^3). Over the parametrisation
// (x^1, y^1, y^2) the fibre is y^3 = h = h_x1 x^1 + h_y1 y^1 + h_y2 y^2 + h_0.
struct AffineCaseOneCycle {
  Rational a{1}, b{1};
  Rational alpha{0}, beta{0}, gamma{0};
  Rational alpha_t{0}, beta_t{0}, gamma_t{0};
  Rational h_x1{0}, h_y1{-1}, h_y2{-1}, h_0{0};

  // Fills h from (a, b, gamma): h = -(1/b) y^1 - (a/b) y^2 + gamma/b. Throws when b = 0.
  static AffineCaseOneCycle from_parameters(Rational a, Rational b, Rational alpha, Rational beta, Rational gamma,
                                            Rational alpha_t = 0, Rational beta_t = 0, Rational gamma_t = 0);
};

struct ExactCheck {
  std::string name;
  ExactComplex value;
};

struct Case1Report {
  std::vector<ExactCheck> checks;  // every value must be exactly zero
  bool passed() const;
};

// omega(d_x1, d_y1), omega(d_x1, d_y2), omega(d_y1, d_y2) and Im(dz^1 ^ dz^2 ^ dz^3) on the
// tangent frame of C.
Case1Report case1_conditions_check(const AffineCaseOneCycle& cycle);

struct Case1Transform {
  // C~ = C_B x C_F~, C_F~ = {y~ = fibre_direction y~_1 - fibre_offset}.
  std::array<Rational, 3> base_direction, base_offset;
  std::array<Rational, 3> fibre_direction, fibre_offset;
  // D_A~ = d + i(connection[0] dx_1 + connection[1] dy~_1), coefficients affine in (x_1, y~_1):
  // connection[k] = c0 + c1 x_1 + c2 y~_1.
  std::array<std::array<Rational, 3>, 2> connection;
  // Parameters of the transformed cycle: gamma -> gamma~, gamma~ -> -gamma, slopes kept.
  AffineCaseOneCycle mirror;
  Case1Report report;  // J u - v components and the curvature coefficient
  bool holomorphic() const;
  bool flat() const;
};

// The transform; fibre_direction_override replaces (1,a,b) for injected violations.
Case1Transform case1_transform(const AffineCaseOneCycle& cycle,
                               std::optional<std::array<Rational, 3>> fibre_direction_override = {});

// C parametrised by (x^1, x^2, y^1): x^3 = f(x^1,x^2), y^2 = g, y^3 = h. Expressions use
// the variables x1, x2, y1.
struct Case2Residuals {
  ScalarField omega_12, omega_13, omega_23;  // omega on pairs of coordinate tangents
  ScalarField special;                       // det of the (x^1,x^2) Hessian of f
  double lagrangian_max = 0.0;
  double special_max = 0.0;
  bool f_affine = false;  // max |Hess f| below tolerance
};

Case2Residuals case2_residuals(const Expression& f, const Expression& g, const Expression& h, const Grid& grid,
                               double affine_tolerance = 1e-10);

struct CoverSheet {
  MirrorConnection connection;
  double f02 = 0.0;
  double dhym = 0.0;
};

struct CoverTransform {
  std::vector<CoverSheet> sheets;
  // Smallest fibre distance (mod 1 per axis) between two sheets over all nodes.
  double min_separation = 0.0;
};

// Sheet s is fm_transform of the section of f_s with the trivial line bundle. The geometry
// must have constant Hessian. Throws RamificationError when two sheets meet.
CoverTransform multisection_cover_transform(std::shared_ptr<const SemiFlatGeometry> geometry,
                                            const std::vector<LiftedField>& sections, double theta,
                                            double collision_tolerance = 1e-9);

// Bundle potential phi_L on M = C^n / lattice. The grid samples either x^1..x^n (phi_L and
// g independent of y, y axes invariant) or x^1..x^n, y^1..y^n.
struct CotangentLiftConfig {
  int n = 1;
  ScalarField phi;
  // g_{j k-bar}, n*n row-major; empty means the identity.
  std::vector<ScalarField> metric;
  std::optional<double> theta;
};

struct CotangentReport {
  double difference = 0.0;            // max |Theta|_S - (omega + F)^n|
  double theta_hol_real_part = 0.0;   // max |Re theta_hol|_S|, zero when pure imaginary
  Complex zero_section_ratio;              // Theta|_0 / det g at the first node
  double zero_section_ratio_spread = 0.0;  // relative spread of that ratio
  std::optional<double> special_residual;  // max |Im e^{-i theta} Theta|_S|
  std::optional<double> dhym_residual;     // max |Im e^{-i theta} (omega + F)^n|
};

// Theta = (pi^* omega + Im theta_hol)^n pulled back by w_j = d phi_L / dz^j (chain rule on the
// sampled w_j) against (omega + F)^n with F = sum phi_{j k-bar} dz^j ^ dz-bar^k from the
// compact Hessian. Both in the dz, dz-bar frame; Im alpha = (alpha - conj alpha) / 2.
CotangentReport cotangent_theta_check(const CotangentLiftConfig& config);

// sum over modes k in [-K,K]^d of seeded amplitudes a_k cos(2 pi k.x) + b_k sin(2 pi k.x).
ScalarField random_bundle_potential(const Grid& grid, std::uint64_t seed, int max_mode = 1, double amplitude = 0.3);

}  // namespace mirrorforge
