#include "capsep/pohozaev.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace capsep {

namespace {

double pow_nonneg(double x, double e) {
    if (x == 0.0)
        return e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    if (e == 1.0) return x;
    return std::pow(x, e);
}

double boundary_term(const RadialProfile& profile, const WeightedGrid& grid, double phi_nu) {
    const double p = profile.params.p;
    const double wn = std::abs(profile.domega_at(grid.theta0));
    return (1.0 - 1.0 / p) * grid.surface_factor *
           std::pow(std::sin(grid.theta0), grid.d - 1) * std::pow(wn, p) * phi_nu;
}

void finish_residuals(PohozaevReport& rep, double term_scale) {
    rep.abs_residual = std::abs(rep.lhs - rep.rhs);
    const double scale = std::max({std::abs(rep.lhs), std::abs(rep.rhs), term_scale});
    const double floor = std::max(1e-14 * std::max(1.0, scale), 1e-280);
    rep.rel_residual = rep.abs_residual / std::max(scale, floor);
}

} // namespace

PohozaevReport audit_identity(const RadialProfile& profile, const WeightedGrid& grid) {
    const ProblemParams& params = profile.params;
    if (grid.theta0 > 0.5 * std::numbers::pi + 1e-12)
        throw std::invalid_argument("audit_identity: need theta0 <= pi/2 (phi = cos positive)");
    if (grid.d != profile.geometry.d)
        throw std::invalid_argument("audit_identity: grid and profile dimension mismatch");

    const double p = params.p;
    const double beta = params.beta;
    double IA = 0.0, IB = 0.0, IC = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double w = grid.weights[i];
        if (w == 0.0) continue;
        const double th = grid.nodes[i];
        const double om = profile.omega_at(th);
        const double dom = profile.domega_at(th);
        const double phi = std::cos(th);
        const double osq = beta * beta * om * om + dom * dom;
        const double wp2 = pow_nonneg(osq, 0.5 * (p - 2.0));
        IA += w * std::pow(std::abs(om), params.q + 1.0) * phi;
        IB += w * wp2 * dom * dom * phi;
        IC += w * wp2 * om * om * phi;
    }
    IA *= grid.surface_factor;
    IB *= grid.surface_factor;
    IC *= grid.surface_factor;

    PohozaevReport rep;
    rep.coeffs = pohozaev_coeffs(params);
    rep.term_A = rep.coeffs.A * IA;
    rep.term_B = rep.coeffs.B * IB;
    rep.term_C = rep.coeffs.C * IC;
    rep.rhs = rep.term_A + rep.term_B + rep.term_C;
    rep.lhs = boundary_term(profile, grid, -std::sin(grid.theta0));
    rep.grid_size = static_cast<int>(grid.nodes.size());
    finish_residuals(rep, std::max({std::abs(rep.term_A), std::abs(rep.term_B),
                                    std::abs(rep.term_C)}));
    return rep;
}

PohozaevReport audit_general_phi(const RadialProfile& profile, const RadialTestFunction& phi,
                                 const WeightedGrid& grid) {
    const ProblemParams& params = profile.params;
    if (grid.d != profile.geometry.d)
        throw std::invalid_argument("audit_general_phi: grid and profile dimension mismatch");

    const double p = params.p;
    const double beta = params.beta;
    const double N = static_cast<double>(params.N);
    const double pb = p * beta + p - N;
    const double lam = lambda_of_beta(beta, p, params.N);

    // grouped integrals of the general identity
    double T_reaction = 0.0;  // (Delta' phi/(q+1) - beta pb phi) omega^{q+1}
    double T_omega_p = 0.0;   // -(1/p) Omega^p Delta' phi
    double T_hessian = 0.0;   // Omega^{p-2} phi'' omega'^2
    double T_gradient = 0.0;  // beta pb Omega^{p-2} omega'^2 phi
    double T_zeroth = 0.0;    // -beta^2 pb lambda Omega^{p-2} omega^2 phi

    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double w = grid.weights[i];
        if (w == 0.0) continue;
        const double th = grid.nodes[i];
        const double om = profile.omega_at(th);
        const double dom = profile.domega_at(th);
        const double phv = phi.phi(th);
        const double lap_phi = laplace_beltrami_radial(phi, th, grid.d);
        const double osq = beta * beta * om * om + dom * dom;
        const double wp2 = pow_nonneg(osq, 0.5 * (p - 2.0));
        const double wp = pow_nonneg(osq, 0.5 * p);
        T_reaction += w * (lap_phi / (params.q + 1.0) - beta * pb * phv) *
                      std::pow(std::abs(om), params.q + 1.0);
        T_omega_p -= w * wp * lap_phi / p;
        T_hessian += w * wp2 * phi.d2phi(th) * dom * dom;
        T_gradient += w * beta * pb * wp2 * dom * dom * phv;
        T_zeroth -= w * beta * beta * pb * lam * wp2 * om * om * phv;
    }
    const double sf = grid.surface_factor;
    T_reaction *= sf;
    T_omega_p *= sf;
    T_hessian *= sf;
    T_gradient *= sf;
    T_zeroth *= sf;

    PohozaevReport rep;
    rep.general_form = true;
    rep.general_terms = {T_reaction, T_omega_p, T_hessian, T_gradient, T_zeroth};
    rep.coeffs = pohozaev_coeffs(params);
    rep.rhs = T_reaction + T_omega_p + T_hessian + T_gradient + T_zeroth;
    rep.lhs = boundary_term(profile, grid, phi.dphi(grid.theta0));
    rep.grid_size = static_cast<int>(grid.nodes.size());
    finish_residuals(rep, std::max({std::abs(T_reaction), std::abs(T_omega_p),
                                    std::abs(T_hessian), std::abs(T_gradient),
                                    std::abs(T_zeroth)}));
    return rep;
}

PhiConditionReport check_phi_conditions(const RadialTestFunction& phi, const ProblemParams& params,
                                        const CapGeometry& geometry, const WeightedGrid& grid) {
    params.validate();
    geometry.validate();

    const double p = params.p;
    const double beta = params.beta;
    const double N = static_cast<double>(params.N);
    const double pb = p * beta + p - N;
    const double lam = lambda_of_beta(beta, p, params.N);

    PhiConditionReport rep;
    rep.min_first = std::numeric_limits<double>::infinity();
    rep.min_second = std::numeric_limits<double>::infinity();
    rep.min_third = std::numeric_limits<double>::infinity();

    for (double th : grid.nodes) {
        if (th <= 0.0) continue;  // pole handled by the even-symmetry limit
        const double phv = phi.phi(th);
        if (!(phv > 0.0))
            throw std::invalid_argument("check_phi_conditions: phi must be positive on the cap");
        const double lap_phi = laplace_beltrami_radial(phi, th, geometry.d);
        rep.min_first = std::min(rep.min_first, lap_phi / ((params.q + 1.0) * phv) - beta * pb);
        // radial phi: Hessian principal values phi'' and cot(theta) phi'
        const double principal[2] = {phi.d2phi(th),
                                     std::cos(th) / std::sin(th) * phi.dphi(th)};
        for (double d2 : principal)
            rep.min_second = std::min(rep.min_second, (p * d2 - lap_phi) / (p * phv) + beta * pb);
        rep.min_third = std::min(rep.min_third, -lap_phi / (p * phv) - pb * lam);
    }
    rep.all_nonnegative = rep.min_first >= 0.0 && rep.min_second >= 0.0 && rep.min_third >= 0.0;
    return rep;
}

NonexistenceReport nonexistence_probe(const ProblemParams& params, const CapGeometry& geometry,
                                      const SolveOptions& options) {
    params.validate();
    geometry.validate();
    if (!(params.p < static_cast<double>(params.N - 1)))
        throw std::invalid_argument("nonexistence_probe: need 1 < p < N - 1 (finite q_c)");
    if (geometry.theta0 > 0.5 * std::numbers::pi + 1e-12)
        throw std::invalid_argument("nonexistence_probe: need theta0 <= pi/2 (starshaped cap)");
    const double qc = q_critical(params.p, params.N);
    const double bc = beta_critical(params.p, params.N);
    if (std::abs(params.q - qc) > 1e-9 * std::max(1.0, qc))
        throw std::invalid_argument("nonexistence_probe: params.q must equal q_c");
    if (std::abs(params.beta - bc) > 1e-9 * std::max(1.0, bc))
        throw std::invalid_argument("nonexistence_probe: params.beta must equal beta_c");
    if (params.epsilon != 1)
        throw std::invalid_argument("nonexistence_probe: the probe targets the source problem");

    NonexistenceReport rep;
    rep.q_c = qc;
    rep.beta_c = bc;
    {
        ProblemParams crit = params;
        crit.q = qc;
        crit.beta = bc;
        rep.certificate = pohozaev_coeffs(crit);
    }

    const int n = options.scan_points;
    rep.amplitudes.reserve(n);
    rep.misses.reserve(n);
    const double ratio = std::log(options.a_max / options.a_min) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double a = options.a_min * std::exp(ratio * i);
        rep.amplitudes.push_back(a);
        rep.misses.push_back(miss_function(a, params, geometry, options.scan_integ).miss);
    }
    for (int i = 0; i + 1 < n; ++i) {
        if ((rep.misses[i] > 0.0) != (rep.misses[i + 1] > 0.0)) {
            rep.sign_change_found = true;
            rep.offending_bracket = {rep.amplitudes[i], rep.amplitudes[i + 1]};
            break;
        }
    }
    return rep;
}

} // namespace capsep
