#include "capsep/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "capsep/params.hpp"
#include "capsep/rootfind.hpp"

namespace capsep {

namespace {

// Signed shortfall of the spectral shot: positive when the shot reaches
// theta0 still positive, negative when it vanishes early. Decreasing in
// Lambda under the Sturm-type ordering the solver relies on.
double spectral_miss(double lambda, double beta, double p, const CapGeometry& geometry,
                     const IntegrateOptions& integ) {
    ProblemParams params;
    params.p = p;
    params.q = p;  // unused in spectral mode, keep admissible
    params.beta = beta;
    params.epsilon = 1;
    params.N = geometry.d + 1;
    RadialProfile prof = integrate_radial(1.0, params, geometry, SpectralMode{lambda}, integ);
    switch (prof.termination) {
        case Termination::reached_end:
            return prof.last_omega();
        case Termination::hit_zero:
            return -(geometry.theta0 - prof.theta_stop);
        case Termination::blew_up:
            return prof.last_omega() > 0.0 ? 1e300 : -1e300;
        default:
            throw IntegrationError("spectral shot failed: " + prof.note);
    }
}

} // namespace

SpectralResult lambda_beta(double beta, double p, const CapGeometry& geometry, double tol,
                           const SpectralOptions& options) {
    geometry.validate();
    if (!(beta > 0.0) || !(p > 1.0))
        throw std::invalid_argument("lambda_beta: need beta > 0, p > 1");

    IntegrateOptions integ = options.integ;
    integ.n_dense = 65;  // only the terminal state matters here

    int evals = 0;
    auto miss = [&](double lam) {
        ++evals;
        return spectral_miss(lam, beta, p, geometry, integ);
    };

    // Geometric expansion of the Lambda bracket from a geometry-derived hint:
    // at p = 2 the exact value is lambda_1(cap)/beta and lambda_1 scales like
    // d (pi/2theta0)^2.
    double hint = options.lambda_hint;
    if (!(hint > 0.0)) {
        const double half_pi = 0.5 * std::numbers::pi;
        hint = geometry.d * (half_pi / geometry.theta0) * (half_pi / geometry.theta0) / beta;
    }
    hint = std::clamp(hint, options.lambda_window_lo, options.lambda_window_hi);

    double lo = hint, hi = hint;
    double flo = miss(lo), fhi = flo;
    for (int k = 0; flo <= 0.0; ++k) {
        if (lo <= options.lambda_window_lo || k >= options.max_expansions)
            throw BracketError("lambda_beta: no surviving shot down to Lambda = " +
                               std::to_string(lo) + " (window [" +
                               std::to_string(options.lambda_window_lo) + ", " +
                               std::to_string(options.lambda_window_hi) + "])");
        hi = lo;
        fhi = flo;
        lo = std::max(options.lambda_window_lo, 0.25 * lo);
        flo = miss(lo);
    }
    for (int k = 0; fhi > 0.0; ++k) {
        if (hi >= options.lambda_window_hi || k >= options.max_expansions)
            throw BracketError("lambda_beta: no early-vanishing shot up to Lambda = " +
                               std::to_string(hi) + " (window [" +
                               std::to_string(options.lambda_window_lo) + ", " +
                               std::to_string(options.lambda_window_hi) + "])");
        if (hi > lo) {
            lo = hi;  // keep the tightest surviving endpoint
            flo = fhi;
        }
        hi = std::min(options.lambda_window_hi, 4.0 * hi);
        fhi = miss(hi);
    }

    RootResult root = find_root(miss, lo, hi, flo, fhi, 0.0, tol);
    evals += root.evaluations;

    SpectralResult res;
    res.kind = SpectralKind::lambda_beta;
    res.value = root.x;
    res.beta = beta;
    res.p = p;
    res.geometry = geometry;
    res.bracket_lo = root.lo;
    res.bracket_hi = root.hi;
    res.evaluations = evals;
    return res;
}

SpectralResult beta_S(double p, const CapGeometry& geometry, double tol,
                      const SpectralOptions& options) {
    geometry.validate();
    if (!(p > 1.0))
        throw std::invalid_argument("beta_S: need p > 1");

    int evals = 0;
    SpectralOptions inner = options;
    const double inner_tol = std::max(1e-12, 0.02 * tol);
    auto gap = [&](double beta) {
        SpectralResult lam = lambda_beta(beta, p, geometry, inner_tol, inner);
        evals += lam.evaluations;
        inner.lambda_hint = lam.value;  // warm start neighbouring solves
        return lam.value - lambda_of_beta(beta, p, geometry.d + 1);
    };

    // gap is strictly decreasing: Lambda_beta decreases while lambda(beta)
    // increases. Expand a bracket around the d-based starting guess.
    double lo = std::max(options.beta_window_lo, 0.5 * geometry.d);
    double hi = std::min(options.beta_window_hi, 2.0 * geometry.d);
    double flo = gap(lo);
    double fhi = gap(hi);
    for (int k = 0; flo <= 0.0; ++k) {
        if (lo <= options.beta_window_lo || k >= options.max_expansions)
            throw BracketError("beta_S: gap stays nonpositive down to beta = " + std::to_string(lo));
        hi = lo;
        fhi = flo;
        lo = std::max(options.beta_window_lo, 0.5 * lo);
        flo = gap(lo);
    }
    for (int k = 0; fhi > 0.0; ++k) {
        if (hi >= options.beta_window_hi || k >= options.max_expansions)
            throw BracketError("beta_S: gap stays positive up to beta = " + std::to_string(hi));
        lo = std::max(lo, hi);
        flo = fhi;
        hi = std::min(options.beta_window_hi, 2.0 * hi);
        fhi = gap(hi);
    }

    RootResult root = find_root(gap, lo, hi, flo, fhi, 0.0, tol);

    SpectralResult res;
    res.kind = SpectralKind::beta_S;
    res.value = root.x;
    res.beta = res.value;
    res.p = p;
    res.geometry = geometry;
    res.bracket_lo = root.lo;
    res.bracket_hi = root.hi;
    res.evaluations = evals;
    return res;
}

namespace {

// Per-element 3-point Gauss rule on [0, 1].
constexpr double GT[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double GW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct Tridiag {
    std::vector<double> diag, off;  // symmetric: off[i] couples i and i+1
};

// Stiffness and mass of the weighted operator on piecewise-linear functions
// over a uniform grid with n elements on [0, theta0]; the last node is
// eliminated by the Dirichlet condition, the pole end is natural.
void assemble(const CapGeometry& geometry, int n, Tridiag& K, Tridiag& M) {
    const double h = geometry.theta0 / n;
    K.diag.assign(n, 0.0);
    K.off.assign(n - 1, 0.0);
    M.diag.assign(n, 0.0);
    M.off.assign(n - 1, 0.0);
    for (int e = 0; e < n; ++e) {
        double k00 = 0, k01 = 0, k11 = 0, m00 = 0, m01 = 0, m11 = 0;
        for (int g = 0; g < 3; ++g) {
            const double theta = (e + GT[g]) * h;
            const double w = GW[g] * h * std::pow(std::sin(theta), geometry.d - 1);
            const double n0 = 1.0 - GT[g], n1 = GT[g];
            k00 += w / (h * h);
            k01 -= w / (h * h);
            k11 += w / (h * h);
            m00 += w * n0 * n0;
            m01 += w * n0 * n1;
            m11 += w * n1 * n1;
        }
        if (e < n - 1) {
            K.diag[e] += k00;
            K.diag[e + 1] += k11;
            K.off[e] += k01;
            M.diag[e] += m00;
            M.diag[e + 1] += m11;
            M.off[e] += m01;
        } else {
            K.diag[e] += k00;  // right node eliminated
            M.diag[e] += m00;
        }
    }
}

void thomas_solve(const Tridiag& T, std::vector<double>& rhs) {
    const int n = static_cast<int>(T.diag.size());
    std::vector<double> c(n - 1);
    std::vector<double> dd(n);
    dd[0] = T.diag[0];
    for (int i = 0; i < n - 1; ++i) {
        c[i] = T.off[i] / dd[i];
        dd[i + 1] = T.diag[i + 1] - T.off[i] * c[i];
    }
    for (int i = 1; i < n; ++i)
        rhs[i] -= c[i - 1] * rhs[i - 1];
    rhs[n - 1] /= dd[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - T.off[i] * rhs[i + 1]) / dd[i];
}

double dot_tridiag(const Tridiag& T, const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += T.diag[i] * x[i] * x[i];
    for (int i = 0; i < n - 1; ++i)
        acc += 2.0 * T.off[i] * x[i] * x[i + 1];
    return acc;
}

void apply_tridiag(const Tridiag& T, const std::vector<double>& x, std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    y.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        y[i] = T.diag[i] * x[i];
    for (int i = 0; i < n - 1; ++i) {
        y[i] += T.off[i] * x[i + 1];
        y[i + 1] += T.off[i] * x[i];
    }
}

} // namespace

double linear_cap_eigenvalue(const CapGeometry& geometry, int n) {
    geometry.validate();
    if (n < 64)
        throw std::invalid_argument("linear_cap_eigenvalue: need n >= 64");

    Tridiag K, M;
    assemble(geometry, n, K, M);

    std::vector<double> x(n), y;
    const double h = geometry.theta0 / n;
    for (int i = 0; i < n; ++i)
        x[i] = std::cos(0.5 * std::numbers::pi * (i * h) / geometry.theta0);

    double mu = 0.0;
    for (int it = 0; it < 200; ++it) {
        apply_tridiag(M, x, y);
        thomas_solve(K, y);
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::abs(v));
        for (double& v : y) v /= norm;
        x.swap(y);
        const double mu_new = dot_tridiag(K, x) / dot_tridiag(M, x);
        if (std::abs(mu_new - mu) <= 1e-14 * std::abs(mu_new) && it > 3) {
            mu = mu_new;
            break;
        }
        mu = mu_new;
    }
    return mu;
}

namespace {

struct RayleighWorkspace {
    int n = 0;             // elements; unknowns are nodes 0..n-1
    double h = 0.0;
    int d = 2;
    double p = 2.0, beta = 0.0;
    std::vector<double> weight;  // Gauss weight * sin^{d-1} per (element, point)

    double numerator(const std::vector<double>& u) const {
        double acc = 0.0;
        for (int e = 0; e < n; ++e) {
            const double u0 = u[e];
            const double u1 = (e + 1 < n) ? u[e + 1] : 0.0;
            const double slope = (u1 - u0) / h;
            for (int g = 0; g < 3; ++g) {
                const double val = u0 * (1.0 - GT[g]) + u1 * GT[g];
                const double arg = beta * beta * val * val + slope * slope;
                acc += weight[3 * e + g] * std::pow(arg, 0.5 * p);
            }
        }
        return acc;
    }

    double denominator(const std::vector<double>& u) const {
        double acc = 0.0;
        for (int e = 0; e < n; ++e) {
            const double u0 = u[e];
            const double u1 = (e + 1 < n) ? u[e + 1] : 0.0;
            for (int g = 0; g < 3; ++g) {
                const double val = u0 * (1.0 - GT[g]) + u1 * GT[g];
                acc += weight[3 * e + g] * std::pow(std::abs(val), p);
            }
        }
        return acc;
    }

    // gradient of numerator - lam * denominator
    void gradient(const std::vector<double>& u, double lam, std::vector<double>& grad) const {
        grad.assign(n, 0.0);
        for (int e = 0; e < n; ++e) {
            const double u0 = u[e];
            const double u1 = (e + 1 < n) ? u[e + 1] : 0.0;
            const double slope = (u1 - u0) / h;
            for (int g = 0; g < 3; ++g) {
                const double n0 = 1.0 - GT[g], n1 = GT[g];
                const double val = u0 * n0 + u1 * n1;
                const double arg = beta * beta * val * val + slope * slope;
                const double w = weight[3 * e + g];
                double fac = (arg > 0.0) ? p * std::pow(arg, 0.5 * p - 1.0) : 0.0;
                const double dval = fac * beta * beta * val;
                const double dslope = fac * slope / h;
                double mval = (val != 0.0)
                                  ? lam * p * std::pow(std::abs(val), p - 1.0) * (val > 0 ? 1 : -1)
                                  : 0.0;
                grad[e] += w * (dval * n0 - dslope - mval * n0);
                if (e + 1 < n)
                    grad[e + 1] += w * (dval * n1 + dslope - mval * n1);
            }
        }
    }
};

} // namespace

SpectralResult lambda_1_beta(double beta, double p, const CapGeometry& geometry, int n,
                             const RayleighOptions& options) {
    geometry.validate();
    if (!(beta > 0.0) || !(p > 1.0))
        throw std::invalid_argument("lambda_1_beta: need beta > 0, p > 1");
    if (n < 64)
        throw std::invalid_argument("lambda_1_beta: need n >= 64");

    RayleighWorkspace ws;
    ws.n = n;
    ws.h = geometry.theta0 / n;
    ws.d = geometry.d;
    ws.p = p;
    ws.beta = beta;
    ws.weight.resize(3 * n);
    for (int e = 0; e < n; ++e)
        for (int g = 0; g < 3; ++g) {
            const double theta = (e + GT[g]) * ws.h;
            ws.weight[3 * e + g] = GW[g] * ws.h * std::pow(std::sin(theta), geometry.d - 1);
        }

    std::vector<double> u(n), grad, u_trial(n), grad_prev, u_prev;
    for (int i = 0; i < n; ++i)
        u[i] = std::cos(0.5 * std::numbers::pi * (i * ws.h) / geometry.theta0);

    auto normalize = [&](std::vector<double>& v) {
        const double den = ws.denominator(v);
        const double scale = std::pow(den, -1.0 / p);
        for (double& x : v) x *= scale;
    };
    normalize(u);

    double lam = ws.numerator(u);
    int stall = 0;
    double step = 1.0;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        ws.gradient(u, lam, grad);
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (gnorm2 <= 1e-28 * lam * lam) break;

        // Barzilai-Borwein seed step, Armijo backtracking safeguard.
        if (!u_prev.empty()) {
            double sy = 0.0, yy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double s = u[i] - u_prev[i];
                const double y = grad[i] - grad_prev[i];
                sy += s * y;
                yy += y * y;
            }
            if (yy > 0.0 && sy > 0.0)
                step = std::clamp(sy / yy, 1e-12, 1e3);
        }
        u_prev = u;
        grad_prev = grad;

        double lam_new = lam;
        bool accepted = false;
        double alpha = step;
        for (int bt = 0; bt < 60; ++bt) {
            for (int i = 0; i < n; ++i)
                u_trial[i] = u[i] - alpha * grad[i];
            normalize(u_trial);
            lam_new = ws.numerator(u_trial);
            if (lam_new <= lam - 1e-4 * alpha * gnorm2) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            ++stall;
            if (stall >= options.stall_iterations) break;
            continue;
        }
        u.swap(u_trial);
        if (std::abs(lam - lam_new) <= options.quotient_tol * std::max(1.0, std::abs(lam_new)))
            ++stall;
        else
            stall = 0;
        lam = lam_new;
        if (stall >= options.stall_iterations) break;
    }
    if (it >= options.max_iterations)
        throw std::runtime_error("lambda_1_beta: no convergence within the iteration cap");

    // Constant-sign certificate for the converged minimizer.
    if (u[0] < 0.0)
        for (double& v : u) v = -v;
    for (int i = 0; i < n; ++i)
        if (!(u[i] > 0.0))
            throw std::runtime_error("lambda_1_beta: converged minimizer changes sign at node " +
                                     std::to_string(i));

    SpectralResult res;
    res.kind = SpectralKind::lambda_1_beta;
    res.value = lam;
    res.beta = beta;
    res.p = p;
    res.geometry = geometry;
    res.evaluations = it;
    res.grid_size = n;
    return res;
}

ContinuationTable beta_S_continuation(std::span<const double> p_grid,
                                      const CapGeometry& geometry, double tol,
                                      const SpectralOptions& options) {
    if (p_grid.empty())
        return {};
    for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
        if (!(p_grid[i] < p_grid[i + 1]))
            throw std::invalid_argument("beta_S_continuation: p grid must be strictly increasing");
    if (!(p_grid.front() > 1.0))
        throw std::invalid_argument("beta_S_continuation: need p > 1");

    ContinuationTable table;
    SpectralOptions opt = options;
    for (double p : p_grid) {
        if (!table.entries.empty()) {
            // warm start: clamp the expansion window around the previous root
            const double prev = table.entries.back().beta_S;
            opt.beta_window_lo = std::max(options.beta_window_lo, 0.25 * prev);
            opt.beta_window_hi = std::min(options.beta_window_hi, 4.0 * prev);
        }
        SpectralResult res;
        try {
            res = beta_S(p, geometry, tol, opt);
        } catch (const BracketError&) {
            res = beta_S(p, geometry, tol, options);  // retry with the full window
        }
        if (!table.entries.empty()) {
            const double dp = p - table.entries.back().p;
            table.max_slope =
                std::max(table.max_slope, std::abs(res.value - table.entries.back().beta_S) / dp);
        }
        table.entries.push_back({p, res.value});
    }
    return table;
}

} // namespace capsep
