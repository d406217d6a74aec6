// Radial reduction of the separable Lane-Emden equation and of the spectral
// problem to a second-order IVP in the polar angle theta, with a series start
// at the pole, adaptive Dormand-Prince integration, and zero-crossing events.
//
// Both problems share the divergence form
//   -(sin^{d-1} Omega^{p-2} omega')' / sin^{d-1} - beta K Omega^{p-2} omega = R(omega)
// with Omega = sqrt(beta^2 omega^2 + omega'^2). In Lane-Emden mode
// K = lambda(beta) and R(omega) = eps omega^q; in spectral mode K = Lambda
// and R = 0.

#ifndef CAPSEP_RADIAL_ODE_HPP
#define CAPSEP_RADIAL_ODE_HPP

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "capsep/geometry.hpp"
#include "capsep/params.hpp"

namespace capsep {

struct LaneEmdenMode {};                   ///< K = lambda(beta), R = eps omega^q
struct SpectralMode { double lambda; };    ///< K = Lambda, R = 0
using RadialMode = std::variant<LaneEmdenMode, SpectralMode>;

struct RadialState {
    double theta = 0.0;
    double omega = 0.0;
    double domega = 0.0;
};

/// Thrown when the integrator cannot continue (step underflow, step cap).
struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Omega = sqrt(beta^2 omega^2 + domega^2).
double big_omega(double beta, double omega, double domega);

/// omega'' from the normal form of the radial divergence equation:
///   omega'' = -[ (p-2) beta^2 omega omega'^2
///                + Omega^2 ((d-1) cot(theta) omega' + beta K omega)
///                + R(omega) Omega^{4-p} ] / (beta^2 omega^2 + (p-1) omega'^2).
/// The denominator is bounded below by min(1, p-1) Omega^2, so the form is
/// nondegenerate while omega > 0 or omega' != 0.
double radial_second_derivative(const RadialState& state, const ProblemParams& params,
                                const CapGeometry& geometry, const RadialMode& mode);

/// omega''(0) = -(beta K a + R(a) (beta a)^{2-p}) / d, the pole limit used by
/// the even series start omega(theta) = a + omega''(0) theta^2/2 + O(theta^4).
double pole_second_derivative(double a, const ProblemParams& params,
                              const CapGeometry& geometry, const RadialMode& mode);

/// State at theta = h from the pole series; requires a > 0 and 0 < h << theta0.
RadialState pole_start(double a, const ProblemParams& params, const CapGeometry& geometry,
                       double h, const RadialMode& mode);

enum class Termination {
    reached_end,  ///< integrated to theta_end with omega > 0 throughout
    hit_zero,     ///< omega crossed zero at theta_stop < theta_end
    blew_up,      ///< |omega| or |omega'| exceeded the overflow guard
    failed        ///< step-size underflow or step-count cap
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol_scale = 1e-14;    ///< absolute tolerance = atol_scale * max(a, 1)
    double theta_end = -1.0;      ///< target angle; < 0 means geometry.theta0
    double overflow_guard = 1e12;
    int n_dense = 2049;           ///< nodes of the stored uniform grid
    double pole_offset = -1.0;    ///< series-start offset; < 0 means max(1e-6, theta0*1e-5)
    double event_theta_tol = 1e-13;
    long max_steps = 2000000;
};

/// Discrete radial solution on a uniform grid over [0, theta_stop], with a
/// C^2 quintic-Hermite evaluator (node second derivatives are recomputed
/// from the equation, so the interpolant is twice continuously differentiable
/// across nodes).
struct RadialProfile {
    ProblemParams params;
    CapGeometry geometry;
    RadialMode mode = LaneEmdenMode{};
    double amplitude = 0.0;
    Termination termination = Termination::failed;
    double theta_stop = 0.0;        ///< end of the stored grid
    std::string note;               ///< diagnostics for failed terminations
    std::vector<double> theta;
    std::vector<double> omega;
    std::vector<double> domega;
    std::vector<double> d2omega;    ///< equation-consistent node curvatures

    double omega_at(double th) const;
    double domega_at(double th) const;
    double last_omega() const { return omega.empty() ? 0.0 : omega.back(); }
    double last_domega() const { return domega.empty() ? 0.0 : domega.back(); }

    /// max over alive nodes of the interpolation cell containing th
    int cell_index(double th) const;
};

/// Integrates from the pole start at amplitude a > 0 towards theta_end,
/// stopping at the first zero crossing of omega (located on the dense output
/// to event_theta_tol) or when the overflow guard trips.
RadialProfile integrate_radial(double a, const ProblemParams& params,
                               const CapGeometry& geometry, const RadialMode& mode,
                               const IntegrateOptions& options = {});

/// Max over interior grid nodes of the divergence-form residual, with the
/// flux sin^{d-1} Omega^{p-2} omega' differenced by a centered five-point
/// stencil on the stored grid. Validates the normal form independently.
double divergence_residual(const RadialProfile& profile);

/// Recomputes d2omega from the stored (theta, omega, domega) grid and the
/// profile's equation; used when a profile is reloaded from serialized data.
void rebuild_curvatures(RadialProfile& profile);

} // namespace capsep

#endif
