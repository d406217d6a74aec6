// Amplitude shooting for the source (eps = +1) and absorption (eps = -1)
// problems on spherical caps: miss function, bracketed amplitude solves,
// existence sweeps across the spectral threshold, homotopy continuation in p,
// and the Cartesian residual check of the reconstructed separable solution.

#ifndef CAPSEP_SHOOTING_HPP
#define CAPSEP_SHOOTING_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "capsep/radial_ode.hpp"
#include "capsep/spectral.hpp"

namespace capsep {

/// One shot of the Lane-Emden IVP. miss > 0 when the profile reaches theta0
/// still positive (value omega(theta0)), miss < 0 when omega vanishes early
/// (minus the angular shortfall), +overflow sentinel when the shot blows up.
struct ShootingRecord {
    double amplitude = 0.0;
    double miss = 0.0;
    RadialProfile profile;
};

ShootingRecord miss_function(double a, const ProblemParams& params, const CapGeometry& geometry,
                             const IntegrateOptions& integ = {});

struct SolveOptions {
    double a_min = 1e-3;
    double a_max = 1e3;
    int scan_points = 200;
    double miss_tol_rel = 1e-9;      ///< accept when |miss| <= miss_tol_rel * a
    int multistart = 10;             ///< absorption refinements from nested brackets
    bool check_thresholds = true;    ///< compute beta_S and warn on regime violations
    IntegrateOptions integ;          ///< options of the final profile
    IntegrateOptions scan_integ{.n_dense = 65};  ///< cheaper options for scan shots
};

enum class SolveStatus { solution_found, no_bracket };

struct SolveResult {
    SolveStatus status = SolveStatus::no_bracket;
    double amplitude = 0.0;
    double achieved_miss = 0.0;
    RadialProfile profile;                           ///< valid when solution_found
    std::vector<std::pair<double, double>> brackets; ///< all sign-change brackets
    int multiplicity = 0;
    bool unique_verified = false;                    ///< absorption multistart agreement
    double multistart_max_distance = 0.0;            ///< max pairwise sup distance
    std::vector<std::string> warnings;
};

/// Scans a log-spaced amplitude grid for sign changes of the miss function
/// and refines the smallest bracket. Multiple brackets are reported, not
/// resolved. no_bracket is evidence of non-existence, not proof.
SolveResult solve_source(const ProblemParams& params, const CapGeometry& geometry,
                         const SolveOptions& options = {});

/// Same scheme for eps = -1, plus a deterministic multistart that refines the
/// root from nested sub-brackets and verifies all profiles coincide.
/// Extra brackets (violating the expected uniqueness) are reported loudly in
/// warnings and unique_verified stays false.
SolveResult solve_absorption(const ProblemParams& params, const CapGeometry& geometry,
                             const SolveOptions& options = {});

enum class VerdictStatus { solution_found, no_bracket, at_threshold };

struct ExistenceVerdict {
    double q = 0.0;
    double beta_q = 0.0;
    double beta_S = 0.0;
    VerdictStatus status = VerdictStatus::no_bracket;
    double amplitude = 0.0;   ///< root amplitude when found
    double a_min = 0.0, a_max = 0.0;
};

/// Verdict for one q sample against a precomputed beta_S.
ExistenceVerdict classify_sample(double q, const ProblemParams& tmpl, const CapGeometry& geometry,
                                 double beta_S_value, const SolveOptions& options = {});

/// Sweeps q over the given samples with beta = beta_q(q) per sample;
/// beta_S is computed once and cached.
std::vector<ExistenceVerdict> existence_scan(std::span<const double> q_values,
                                             const ProblemParams& tmpl,
                                             const CapGeometry& geometry,
                                             const SolveOptions& options = {});

/// Same sweep parametrized by beta; each sample maps through the coupling
/// q + 1 = p(1 + beta)/beta.
std::vector<ExistenceVerdict> existence_scan_beta(std::span<const double> beta_values,
                                                  const ProblemParams& tmpl,
                                                  const CapGeometry& geometry,
                                                  const SolveOptions& options = {});

struct HomotopyOptions {
    double p_start = 2.0;
    double dp = 0.05;
    int max_halvings = 6;         ///< adaptive step halving on bracket loss
    double bracket_factor = 1.6;  ///< warm bracket half-width ratio around the last root
    SolveOptions solve;
};

/// Solves at p_start (where the linear oracles live), then continues the
/// root amplitude along a p grid to the target exponent, re-bracketing
/// around the previous root. Throws BracketError with the last good p when
/// a continuation step loses the root.
RadialProfile p_homotopy_solve(const ProblemParams& target, const CapGeometry& geometry,
                               const HomotopyOptions& options = {});

/// Reconstructs u(x) = |x|^{-beta} omega(theta(x)) on an annulus inside the
/// cone and evaluates the Cartesian equation -div(|grad u|^{p-2} grad u) =
/// eps u^q (right side zero for spectral profiles) by second-order central
/// differences with step fd_step. Returns the max relative residual over the
/// sample; supports N <= 4.
double separable_residual(const RadialProfile& profile, int sample_points, double fd_step);

} // namespace capsep

#endif
