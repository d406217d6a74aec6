#include "capsep/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "capsep/rootfind.hpp"

namespace capsep {

namespace {

constexpr double kOverflowMiss = 1e300;

double miss_value(const RadialProfile& prof, const CapGeometry& geometry) {
    switch (prof.termination) {
        case Termination::reached_end:
            return prof.last_omega();
        case Termination::hit_zero:
            return -(geometry.theta0 - prof.theta_stop);
        case Termination::blew_up:
            // a rising blow-up stays positive; a plunging one is an imminent crossing
            return prof.last_domega() >= 0.0 ? kOverflowMiss : -(geometry.theta0 - prof.theta_stop);
        default:
            throw IntegrationError("miss_function: integration failed: " + prof.note);
    }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double ratio = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::exp(ratio * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

struct ScanOutcome {
    std::vector<double> amplitudes;
    std::vector<double> misses;
    std::vector<std::pair<double, double>> brackets;
};

ScanOutcome scan_amplitudes(const ProblemParams& params, const CapGeometry& geometry,
                            const SolveOptions& options) {
    ScanOutcome out;
    out.amplitudes = log_spaced(options.a_min, options.a_max, options.scan_points);
    out.misses.reserve(out.amplitudes.size());
    for (double a : out.amplitudes)
        out.misses.push_back(miss_value(
            integrate_radial(a, params, geometry, LaneEmdenMode{}, options.scan_integ), geometry));
    for (std::size_t i = 0; i + 1 < out.amplitudes.size(); ++i) {
        const double f0 = out.misses[i], f1 = out.misses[i + 1];
        if (f0 == 0.0)
            out.brackets.emplace_back(out.amplitudes[i], out.amplitudes[i]);
        else if ((f0 > 0.0) != (f1 > 0.0))
            out.brackets.emplace_back(out.amplitudes[i], out.amplitudes[i + 1]);
    }
    return out;
}

// Refines a sign-change bracket of the miss function down to the relative
// root tolerance; returns the amplitude on the surviving (miss >= 0) side.
double refine_bracket(const ProblemParams& params, const CapGeometry& geometry,
                      const SolveOptions& options, double lo, double hi, double* achieved) {
    auto miss = [&](double a) {
        return miss_value(integrate_radial(a, params, geometry, LaneEmdenMode{}, options.scan_integ),
                          geometry);
    };
    double flo = miss(lo), fhi = miss(hi);
    if (flo == 0.0) {
        *achieved = 0.0;
        return lo;
    }
    if (fhi == 0.0) {
        *achieved = 0.0;
        return hi;
    }
    for (int widen = 0; (flo > 0.0) == (fhi > 0.0) && widen < 12; ++widen) {
        lo *= 0.8;
        hi *= 1.25;
        flo = miss(lo);
        fhi = miss(hi);
    }
    RootResult root = find_root(miss, lo, hi, flo, fhi, 1e-14, 0.0, 300);
    // pick the endpoint whose shot survives (nonnegative miss)
    double a_pos = root.x, f_pos = root.fx;
    if (f_pos < 0.0) {
        a_pos = (root.lo == root.x) ? root.hi : root.lo;
        f_pos = miss(a_pos);
    }
    if (f_pos < 0.0) {
        // both endpoints ended on the crossing side within rounding; nudge
        for (int k = 1; k <= 8 && f_pos < 0.0; ++k) {
            a_pos *= (1.0 + std::ldexp(1e-13, k));
            f_pos = miss(a_pos);
        }
    }
    *achieved = f_pos;
    return a_pos;
}

void append_threshold_warnings(const ProblemParams& params, const CapGeometry& geometry,
                               SolveResult& result) {
    if (params.epsilon == 1) {
        const double qc = q_critical(params.p, params.N);
        if (params.q >= qc)
            result.warnings.push_back("q >= q_c: outside the existence regime of the source problem");
    }
    const double bq = beta_q(params.q, params.p);
    const double bs = beta_S(params.p, geometry).value;
    if (params.epsilon == 1 && bq >= bs)
        result.warnings.push_back("beta_q >= beta_S: no positive source solution expected");
    if (params.epsilon == -1 && params.beta <= bs)
        result.warnings.push_back("beta <= beta_S: no positive absorption solution expected");
}

SolveResult solve_common(const ProblemParams& params, const CapGeometry& geometry,
                         const SolveOptions& options) {
    params.validate();
    geometry.validate();

    SolveResult result;
    if (options.check_thresholds)
        append_threshold_warnings(params, geometry, result);

    ScanOutcome scan = scan_amplitudes(params, geometry, options);
    result.brackets = scan.brackets;
    result.multiplicity = static_cast<int>(scan.brackets.size());
    if (scan.brackets.empty()) {
        result.status = SolveStatus::no_bracket;
        return result;
    }

    const auto [lo, hi] = scan.brackets.front();  // smallest-amplitude root
    double achieved = 0.0;
    result.amplitude = refine_bracket(params, geometry, options, lo, hi, &achieved);
    result.achieved_miss = achieved;
    result.status = SolveStatus::solution_found;
    result.profile = integrate_radial(result.amplitude, params, geometry, LaneEmdenMode{},
                                      options.integ);
    if (std::abs(achieved) > options.miss_tol_rel * result.amplitude)
        result.warnings.push_back("root refinement stalled: |miss| = " +
                                  std::to_string(std::abs(achieved)));
    return result;
}

} // namespace

ShootingRecord miss_function(double a, const ProblemParams& params, const CapGeometry& geometry,
                             const IntegrateOptions& integ) {
    if (!(a > 0.0))
        throw std::invalid_argument("miss_function: need a > 0");
    ShootingRecord rec;
    rec.amplitude = a;
    rec.profile = integrate_radial(a, params, geometry, LaneEmdenMode{}, integ);
    rec.miss = miss_value(rec.profile, geometry);
    return rec;
}

SolveResult solve_source(const ProblemParams& params, const CapGeometry& geometry,
                         const SolveOptions& options) {
    if (params.epsilon != 1)
        throw std::invalid_argument("solve_source: params.epsilon must be +1");
    return solve_common(params, geometry, options);
}

SolveResult solve_absorption(const ProblemParams& params, const CapGeometry& geometry,
                             const SolveOptions& options) {
    if (params.epsilon != -1)
        throw std::invalid_argument("solve_absorption: params.epsilon must be -1");
    SolveResult result = solve_common(params, geometry, options);
    if (result.status != SolveStatus::solution_found)
        return result;
    if (result.multiplicity > 1)
        result.warnings.push_back("multiplicity detected: " + std::to_string(result.multiplicity) +
                                  " brackets found where a unique solution is expected");

    // Deterministic nested sub-brackets around the located root.
    const auto [lo0, hi0] = result.brackets.front();
    const int m = std::max(1, options.multistart);
    std::vector<RadialProfile> profiles;
    std::vector<double> roots;
    for (int j = 0; j < m; ++j) {
        const double shrink = static_cast<double>(j) / (2.0 * m + 2.0);
        double lo = lo0 + (hi0 - lo0) * shrink;
        double hi = hi0 - (hi0 - lo0) * shrink;
        double achieved = 0.0;
        const double a = refine_bracket(params, geometry, options, lo, hi, &achieved);
        roots.push_back(a);
        profiles.push_back(
            integrate_radial(a, params, geometry, LaneEmdenMode{}, options.integ));
    }
    double max_dist = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = i + 1; j < profiles.size(); ++j) {
            const auto& pa = profiles[i];
            const auto& pb = profiles[j];
            double dist = 0.0;
            for (std::size_t k = 0; k < pa.theta.size(); ++k)
                dist = std::max(dist, std::abs(pa.omega[k] - pb.omega_at(pa.theta[k])));
            max_dist = std::max(max_dist, dist);
        }
    result.multistart_max_distance = max_dist;
    result.unique_verified = (result.multiplicity == 1) && (max_dist < 1e-6);
    if (!result.unique_verified && result.multiplicity == 1)
        result.warnings.push_back("multistart profiles diverge: sup distance = " +
                                  std::to_string(max_dist));
    result.amplitude = roots.front();
    result.profile = profiles.front();
    return result;
}

ExistenceVerdict classify_sample(double q, const ProblemParams& tmpl, const CapGeometry& geometry,
                                 double beta_S_value, const SolveOptions& options) {
    ProblemParams params = tmpl;
    params.q = q;
    params.beta = beta_q(q, params.p);

    ExistenceVerdict v;
    v.q = q;
    v.beta_q = params.beta;
    v.beta_S = beta_S_value;
    v.a_min = options.a_min;
    v.a_max = options.a_max;

    if (std::abs(params.beta - beta_S_value) <= 1e-10 * std::max(1.0, beta_S_value)) {
        v.status = VerdictStatus::at_threshold;
        return v;
    }

    SolveOptions opt = options;
    opt.check_thresholds = false;
    const SolveResult res = (params.epsilon == 1) ? solve_source(params, geometry, opt)
                                                  : solve_absorption(params, geometry, opt);
    if (res.status == SolveStatus::solution_found) {
        v.status = VerdictStatus::solution_found;
        v.amplitude = res.amplitude;
    } else {
        v.status = VerdictStatus::no_bracket;
    }
    return v;
}

std::vector<ExistenceVerdict> existence_scan(std::span<const double> q_values,
                                             const ProblemParams& tmpl,
                                             const CapGeometry& geometry,
                                             const SolveOptions& options) {
    std::vector<ExistenceVerdict> verdicts;
    if (q_values.empty())
        return verdicts;
    const double bs = beta_S(tmpl.p, geometry).value;
    verdicts.reserve(q_values.size());
    for (double q : q_values)
        verdicts.push_back(classify_sample(q, tmpl, geometry, bs, options));
    return verdicts;
}

std::vector<ExistenceVerdict> existence_scan_beta(std::span<const double> beta_values,
                                                  const ProblemParams& tmpl,
                                                  const CapGeometry& geometry,
                                                  const SolveOptions& options) {
    std::vector<double> qs;
    qs.reserve(beta_values.size());
    for (double beta : beta_values)
        qs.push_back(q_from_beta(beta, tmpl.p));
    return existence_scan(qs, tmpl, geometry, options);
}

RadialProfile p_homotopy_solve(const ProblemParams& target, const CapGeometry& geometry,
                               const HomotopyOptions& options) {
    target.validate();

    ProblemParams params = target;
    params.p = options.p_start;
    SolveOptions cold = options.solve;
    cold.check_thresholds = false;
    SolveResult base = (params.epsilon == 1) ? solve_source(params, geometry, cold)
                                             : solve_absorption(params, geometry, cold);
    if (base.status != SolveStatus::solution_found)
        throw BracketError("p_homotopy_solve: no root at the starting exponent p = " +
                           std::to_string(options.p_start));
    if (params.p == target.p)
        return base.profile;

    double a_prev = base.amplitude;
    double root_lo = a_prev, root_hi = a_prev;
    double p_now = options.p_start;
    const double direction = (target.p > options.p_start) ? 1.0 : -1.0;
    double dp = options.dp;

    auto miss_at = [&](const ProblemParams& pp, double a) {
        return miss_value(integrate_radial(a, pp, geometry, LaneEmdenMode{}, cold.scan_integ),
                          geometry);
    };

    while (std::abs(target.p - p_now) > 1e-14) {
        const double step = std::min(dp, std::abs(target.p - p_now));
        const double p_next = (std::abs(target.p - p_now) <= dp + 1e-14)
                                  ? target.p
                                  : p_now + direction * step;
        ProblemParams pp = target;
        pp.p = p_next;

        double lo = a_prev / options.bracket_factor;
        double hi = a_prev * options.bracket_factor;
        double flo = miss_at(pp, lo), fhi = miss_at(pp, hi);
        int widen = 0;
        while ((flo > 0.0) == (fhi > 0.0) && widen < 8) {
            lo /= options.bracket_factor;
            hi *= options.bracket_factor;
            flo = miss_at(pp, lo);
            fhi = miss_at(pp, hi);
            ++widen;
        }
        if ((flo > 0.0) == (fhi > 0.0)) {
            if (dp > options.dp / std::ldexp(1.0, options.max_halvings)) {
                dp *= 0.5;
                continue;
            }
            throw BracketError("p_homotopy_solve: bracket lost at p = " + std::to_string(p_next) +
                               ", last good p = " + std::to_string(p_now));
        }
        RootResult root = (flo == 0.0) ? RootResult{lo, 0.0, lo, lo, 0}
                        : (fhi == 0.0) ? RootResult{hi, 0.0, hi, hi, 0}
                                       : find_root([&](double a) { return miss_at(pp, a); }, lo, hi,
                                                   flo, fhi, 1e-13, 0.0, 300);
        a_prev = root.x;
        root_lo = std::min(root.lo, root.hi * (1.0 - 1e-12));
        root_hi = std::max(root.hi, root.lo * (1.0 + 1e-12));
        p_now = p_next;
    }

    double achieved = 0.0;
    const double a_root =
        refine_bracket(target, geometry, options.solve, root_lo, root_hi, &achieved);
    return integrate_radial(a_root, target, geometry, LaneEmdenMode{}, options.solve.integ);
}

namespace {

// u(x) = r^{-beta} omega(theta) with theta measured from the last axis.
double separable_value(const RadialProfile& prof, const double* x, int N) {
    double r2 = 0.0;
    for (int i = 0; i < N; ++i) r2 += x[i] * x[i];
    const double r = std::sqrt(r2);
    const double theta = std::acos(std::clamp(x[N - 1] / r, -1.0, 1.0));
    return std::pow(r, -prof.params.beta) * prof.omega_at(theta);
}

} // namespace

double separable_residual(const RadialProfile& profile, int sample_points, double fd_step) {
    const int N = profile.params.N;
    if (N > 4)
        throw std::invalid_argument("separable_residual: Cartesian check supports N <= 4");
    if (sample_points < 1 || !(fd_step > 0.0))
        throw std::invalid_argument("separable_residual: need sample_points >= 1 and fd_step > 0");

    const double p = profile.params.p;
    const bool lane = std::holds_alternative<LaneEmdenMode>(profile.mode);
    const double theta_hi = 0.85 * profile.geometry.theta0;
    const double theta_lo = 0.10 * profile.geometry.theta0;
    const double radii[3] = {0.8, 1.1, 1.6};

    double worst = 0.0;
    for (int s = 0; s < sample_points; ++s) {
        const double frac = (sample_points == 1) ? 0.5
                                                 : static_cast<double>(s) / (sample_points - 1);
        const double theta = theta_lo + (theta_hi - theta_lo) * frac;
        const double r = radii[s % 3];

        double x[4] = {0, 0, 0, 0};
        x[0] = r * std::sin(theta);
        x[N - 1] = r * std::cos(theta);

        const double h = fd_step;
        double grad[4] = {0, 0, 0, 0};
        double hess[4][4];
        const double u0 = separable_value(profile, x, N);
        for (int i = 0; i < N; ++i) {
            double xp[4], xm[4];
            std::copy(x, x + 4, xp);
            std::copy(x, x + 4, xm);
            xp[i] += h;
            xm[i] -= h;
            const double up = separable_value(profile, xp, N);
            const double um = separable_value(profile, xm, N);
            grad[i] = (up - um) / (2.0 * h);
            hess[i][i] = (up - 2.0 * u0 + um) / (h * h);
        }
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                double xpp[4], xpm[4], xmp[4], xmm[4];
                std::copy(x, x + 4, xpp);
                std::copy(x, x + 4, xpm);
                std::copy(x, x + 4, xmp);
                std::copy(x, x + 4, xmm);
                xpp[i] += h; xpp[j] += h;
                xpm[i] += h; xpm[j] -= h;
                xmp[i] -= h; xmp[j] += h;
                xmm[i] -= h; xmm[j] -= h;
                hess[i][j] = hess[j][i] =
                    (separable_value(profile, xpp, N) - separable_value(profile, xpm, N) -
                     separable_value(profile, xmp, N) + separable_value(profile, xmm, N)) /
                    (4.0 * h * h);
            }

        double g2 = 0.0, lap = 0.0, hgg = 0.0, habs = 0.0;
        for (int i = 0; i < N; ++i) {
            g2 += grad[i] * grad[i];
            lap += hess[i][i];
            habs += std::abs(hess[i][i]);
            for (int j = 0; j < N; ++j)
                hgg += hess[i][j] * grad[i] * grad[j];
        }
        const double gm = std::pow(g2, 0.5 * (p - 2.0));
        const double p_laplace = gm * (lap + (p - 2.0) * hgg / g2);
        double residual = p_laplace;
        double scale = gm * habs * (1.0 + std::abs(p - 2.0));
        if (lane) {
            const double forcing = profile.params.epsilon * std::pow(std::abs(u0), profile.params.q);
            residual += forcing;
            scale += std::abs(forcing);
        }
        worst = std::max(worst, std::abs(residual) / std::max(scale, 1e-300));
    }
    return worst;
}

} // namespace capsep
