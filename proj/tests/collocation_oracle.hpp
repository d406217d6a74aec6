// Test-only oracle: damped-Newton collocation solver for the p = 2 radial
// semilinear equation
//   omega'' + (d-1) cot(theta) omega' + beta lambda(beta) omega + eps omega^q = 0
// on (0, theta0) with omega'(0) = 0 and omega(theta0) = 0, discretized by
// second-order finite differences. Independent of the shooting pipeline.

#ifndef CAPSEP_TESTS_COLLOCATION_ORACLE_HPP
#define CAPSEP_TESTS_COLLOCATION_ORACLE_HPP

#include <cmath>
#include <optional>
#include <vector>

namespace capsep_tests {

struct CollocationSolution {
    std::vector<double> theta;
    std::vector<double> omega;  // includes the zero boundary node
    double residual_norm = 0.0;
};

inline void tridiag_solve(std::vector<double>& sub, std::vector<double>& diag,
                          std::vector<double>& sup, std::vector<double>& rhs) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

/// Newton iteration from the initial amplitude guess; returns a converged
/// strictly positive solution or nullopt.
inline std::optional<CollocationSolution> collocation_solve(
    int d, double theta0, double coeff /* beta*lambda(beta) */, double q, int epsilon,
    double init_amplitude, int n = 2000) {
    const double h = theta0 / n;
    std::vector<double> u(n);  // unknowns at nodes 0..n-1; node n pinned to 0
    for (int i = 0; i < n; ++i)
        u[i] = init_amplitude * std::cos(0.5 * M_PI * (i * h) / theta0);

    auto residual = [&](const std::vector<double>& v, std::vector<double>& r) {
        r.assign(n, 0.0);
        r[0] = d * 2.0 * (v[1] - v[0]) / (h * h) + coeff * v[0] +
               epsilon * std::pow(std::abs(v[0]), q) * (v[0] >= 0 ? 1 : -1);
        for (int i = 1; i < n; ++i) {
            const double up = (i + 1 < n) ? v[i + 1] : 0.0;
            const double cot = std::cos(i * h) / std::sin(i * h);
            r[i] = (up - 2.0 * v[i] + v[i - 1]) / (h * h) +
                   (d - 1.0) * cot * (up - v[i - 1]) / (2.0 * h) + coeff * v[i] +
                   epsilon * std::pow(std::abs(v[i]), q) * (v[i] >= 0 ? 1 : -1);
        }
    };

    // the centered second difference carries ~|u|/h^2 rounding noise, which
    // floors the achievable residual
    const double floor = 64.0 * 1e-16 * std::max(1.0, init_amplitude) / (h * h);
    std::vector<double> r, sub(n), diag(n), sup(n), delta;
    residual(u, r);
    double rnorm = 0.0;
    for (double v : r) rnorm = std::max(rnorm, std::abs(v));

    for (int it = 0; it < 80; ++it) {
        if (rnorm < floor) break;
        sub.assign(n, 0.0);
        diag.assign(n, 0.0);
        sup.assign(n, 0.0);
        diag[0] = -2.0 * d / (h * h) + coeff + epsilon * q * std::pow(std::abs(u[0]), q - 1.0);
        sup[0] = 2.0 * d / (h * h);
        for (int i = 1; i < n; ++i) {
            const double cot = std::cos(i * h) / std::sin(i * h);
            sub[i] = 1.0 / (h * h) - (d - 1.0) * cot / (2.0 * h);
            diag[i] = -2.0 / (h * h) + coeff + epsilon * q * std::pow(std::abs(u[i]), q - 1.0);
            if (i + 1 < n)
                sup[i] = 1.0 / (h * h) + (d - 1.0) * cot / (2.0 * h);
        }
        delta = r;
        tridiag_solve(sub, diag, sup, delta);

        double step = 1.0;
        bool improved = false;
        std::vector<double> trial(n), rt;
        for (int ls = 0; ls < 30; ++ls) {
            for (int i = 0; i < n; ++i)
                trial[i] = u[i] - step * delta[i];
            residual(trial, rt);
            double tn = 0.0;
            for (double v : rt) tn = std::max(tn, std::abs(v));
            if (tn < rnorm) {
                u = trial;
                r = rt;
                rnorm = tn;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;  // stalled at the rounding floor
    }
    if (!(rnorm < std::max(floor, 1e-6 * std::max(1.0, init_amplitude))))
        return std::nullopt;
    for (double v : u)
        if (!(v > 0.0))
            return std::nullopt;

    CollocationSolution sol;
    sol.theta.resize(n + 1);
    sol.omega.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        sol.theta[i] = i * h;
        sol.omega[i] = (i < n) ? u[i] : 0.0;
    }
    sol.residual_norm = rnorm;
    return sol;
}

} // namespace capsep_tests

#endif
