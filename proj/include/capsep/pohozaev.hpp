// Numerical verification of the boundary-integral identity satisfied by
// positive solutions of the source problem: the specialized form with
// phi = cos(theta), the general twice-differentiable-phi form, the pointwise
// sign conditions a substitute phi must satisfy, and the critical-exponent
// nonexistence probe.

#ifndef CAPSEP_POHOZAEV_HPP
#define CAPSEP_POHOZAEV_HPP

#include <array>
#include <utility>
#include <vector>

#include "capsep/geometry.hpp"
#include "capsep/radial_ode.hpp"
#include "capsep/shooting.hpp"

namespace capsep {

/// Both sides of the identity evaluated by cap quadrature. The boundary side
/// is (1 - 1/p) sigma_{d-1} sin^{d-1}(theta0) |omega'(theta0)|^p phi_nu.
/// For the specialized audit the interior side is
/// A int omega^{q+1} phi + B int Omega^{p-2} omega'^2 phi + C int Omega^{p-2} omega^2 phi;
/// for the general-phi audit the five grouped integrals land in
/// general_terms and rhs is their sum.
struct PohozaevReport {
    double lhs = 0.0;
    double term_A = 0.0;       ///< A-weighted integral (specialized form)
    double term_B = 0.0;
    double term_C = 0.0;
    PohozaevCoeffs coeffs;
    std::array<double, 5> general_terms{};  ///< general-phi grouping, when used
    bool general_form = false;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    int grid_size = 0;
};

/// Audits the identity with phi = cos(theta) (the half-sphere first
/// eigenfunction) against a radial profile. Requires theta0 <= pi/2 so phi
/// stays positive on the cap; beta in the coefficients is the profile's beta.
PohozaevReport audit_identity(const RadialProfile& profile, const WeightedGrid& grid);

/// Audits the general form for any phi in C^2 of the closed cap. For radial
/// phi the Hessian acts as D2phi(grad omega, grad omega) = phi'' omega'^2.
PohozaevReport audit_general_phi(const RadialProfile& profile, const RadialTestFunction& phi,
                                 const WeightedGrid& grid);

/// Pointwise minima over the grid of the three sign conditions a positive
/// test function must satisfy for the nonexistence argument; for radial phi
/// the extreme Hessian directions realize phi'' and cot(theta) phi'.
struct PhiConditionReport {
    double min_first = 0.0;    ///< Delta' phi /((q+1) phi) - beta (p beta + p - N)
    double min_second = 0.0;   ///< (p D2phi - Delta' phi)/(p phi) + beta (p beta + p - N)
    double min_third = 0.0;    ///< -Delta' phi/(p phi) - (p beta + p - N) lambda(beta)
    bool all_nonnegative = false;
};

PhiConditionReport check_phi_conditions(const RadialTestFunction& phi, const ProblemParams& params,
                                        const CapGeometry& geometry, const WeightedGrid& grid);

/// Dense amplitude scan at the critical exponent: records every miss sign,
/// asserts the absence of a shooting bracket, and bundles the vanishing
/// coefficient certificate. A sign change is reported as a numerical anomaly
/// (sign_change_found = true with the offending bracket), never suppressed.
struct NonexistenceReport {
    std::vector<double> amplitudes;
    std::vector<double> misses;
    bool sign_change_found = false;
    std::pair<double, double> offending_bracket{0.0, 0.0};
    PohozaevCoeffs certificate;
    double q_c = 0.0;
    double beta_c = 0.0;
};

NonexistenceReport nonexistence_probe(const ProblemParams& params, const CapGeometry& geometry,
                                      const SolveOptions& options = {});

} // namespace capsep

#endif
