// Spectral quantities of the radial cap problem: the constant Lambda_beta of
// the nonlinear eigenvalue problem, the spectral exponent beta_S solving
// Lambda_beta = lambda(beta), the first eigenvalue lambda_{1,beta} of the
// weighted p-homogeneous Rayleigh quotient, and a finite-difference linear
// eigensolver used as the p = 2 cross-check.

#ifndef CAPSEP_SPECTRAL_HPP
#define CAPSEP_SPECTRAL_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "capsep/geometry.hpp"
#include "capsep/radial_ode.hpp"

namespace capsep {

/// Thrown when no sign-change bracket exists inside the scanned window.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SpectralKind { lambda_beta, beta_S, lambda_1_beta };

struct SpectralResult {
    SpectralKind kind = SpectralKind::lambda_beta;
    double value = 0.0;
    double beta = 0.0;       ///< input beta where applicable
    double p = 0.0;
    CapGeometry geometry;
    double bracket_lo = 0.0; ///< final root bracket (root solves only)
    double bracket_hi = 0.0;
    int evaluations = 0;
    int grid_size = 0;       ///< discretization size (variational solve only)
};

struct SpectralOptions {
    double lambda_window_lo = 1e-6;   ///< Lambda search window
    double lambda_window_hi = 1e4;
    double lambda_hint = 0.0;         ///< 0 means derive from geometry
    double beta_window_lo = 1e-4;     ///< beta_S bracket expansion limits
    double beta_window_hi = 1e4;
    int max_expansions = 40;
    IntegrateOptions integ;
};

/// The unique Lambda > 0 whose spectral-mode shot from amplitude 1 first
/// vanishes exactly at theta0. Strict decrease of the crossing angle in
/// Lambda is relied on for bisection and checked through the bracket signs.
SpectralResult lambda_beta(double beta, double p, const CapGeometry& geometry,
                           double tol = 1e-9, const SpectralOptions& options = {});

/// The unique beta > 0 with Lambda_beta = beta (p-1) + p - d - 1, found by
/// expanding a bracket for the strictly decreasing gap function.
SpectralResult beta_S(double p, const CapGeometry& geometry, double tol = 1e-8,
                      const SpectralOptions& options = {});

struct RayleighOptions {
    int max_iterations = 200000;
    double quotient_tol = 1e-13;   ///< relative stall tolerance
    int stall_iterations = 30;
};

/// Minimizes int (beta^2 w^2 + w'^2)^{p/2} sin^{d-1} over piecewise-linear
/// radial functions vanishing at theta0 with int |w|^p sin^{d-1} = 1, by
/// normalized projected gradient descent with Armijo backtracking from the
/// positive guess cos(pi theta / (2 theta0)). Throws if the minimizer does
/// not keep one sign or the iteration cap is hit.
SpectralResult lambda_1_beta(double beta, double p, const CapGeometry& geometry,
                             int n = 256, const RayleighOptions& options = {});

/// First Dirichlet eigenvalue of -(sin^{1-d})(sin^{d-1} u')' on (0, theta0)
/// by symmetric second-order discretization and inverse power iteration;
/// natural (regularity) condition at theta = 0.
double linear_cap_eigenvalue(const CapGeometry& geometry, int n = 2048);

struct ContinuationEntry {
    double p = 0.0;
    double beta_S = 0.0;
};

struct ContinuationTable {
    std::vector<ContinuationEntry> entries;
    double max_slope = 0.0;  ///< max |d beta_S| / dp over adjacent entries
};

/// beta_S along an increasing p grid, warm-starting each bracket from the
/// previous root.
ContinuationTable beta_S_continuation(std::span<const double> p_grid,
                                      const CapGeometry& geometry, double tol = 1e-8,
                                      const SpectralOptions& options = {});

} // namespace capsep

#endif
