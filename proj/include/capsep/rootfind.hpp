// Safeguarded scalar root finding on a sign-change bracket.

#ifndef CAPSEP_ROOTFIND_HPP
#define CAPSEP_ROOTFIND_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace capsep {

struct RootResult {
    double x = 0.0;        ///< best abscissa
    double fx = 0.0;       ///< f at x
    double lo = 0.0;       ///< final bracket
    double hi = 0.0;
    int evaluations = 0;
};

/// Brent-style bisection/secant/inverse-quadratic iteration on [lo, hi].
/// Requires f(lo) and f(hi) of opposite sign (zero endpoints are accepted).
/// Stops when the bracket width drops below xtol_abs + |x| xtol_rel.
inline RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                            double flo, double fhi, double xtol_rel, double xtol_abs = 0.0,
                            int max_iter = 200) {
    if (!(lo < hi))
        throw std::invalid_argument("find_root: need lo < hi");
    if (flo == 0.0) return {lo, 0.0, lo, lo, 0};
    if (fhi == 0.0) return {hi, 0.0, hi, hi, 0};
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("find_root: endpoints do not bracket a sign change");

    double a = lo, b = hi, fa = flo, fb = fhi;
    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, s = b, fs = fb, d = 0.0;
    bool mflag = true;
    int evals = 0;

    for (int it = 0; it < max_iter; ++it) {
        const double tol = xtol_abs + xtol_rel * std::abs(b);
        if (std::abs(b - a) <= tol || fb == 0.0) break;

        if (fa != fc && fb != fc) {
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);
        }

        const double m = 0.5 * (a + b);
        const bool cond = !((s > std::min(m, b) && s < std::max(m, b))) ||
                          (mflag && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
                          (!mflag && std::abs(s - b) >= 0.5 * std::abs(c - d)) ||
                          (mflag && std::abs(b - c) < tol) ||
                          (!mflag && std::abs(c - d) < tol);
        if (cond) {
            s = m;
            mflag = true;
        } else {
            mflag = false;
        }

        fs = f(s);
        ++evals;
        if (fs == 0.0) {
            a = b = s;
            fa = fb = fs;
            break;
        }
        d = c;
        c = b;
        fc = fb;
        if ((fa > 0.0) != (fs > 0.0)) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }

    RootResult r;
    r.x = b;
    r.fx = fb;
    r.lo = std::min(a, b);
    r.hi = std::max(a, b);
    r.evaluations = evals;
    return r;
}

} // namespace capsep

#endif
