#include "capsep/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capsep {

namespace {

// (x)^e for x >= 0 with the x == 0 limit taken for positive exponents.
double pow_nonneg(double x, double e) {
    if (x == 0.0) {
        if (e > 0.0) return 0.0;
        if (e == 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    if (e == 1.0) return x;
    if (e == 0.5) return std::sqrt(x);
    return std::pow(x, e);
}

// Odd extension of the power nonlinearity; only the omega > 0 branch is
// meaningful, the extension keeps transient event-bracketing states finite.
double reaction_term(double omega, double q, int epsilon) {
    if (omega == 0.0) return 0.0;
    const double mag = std::pow(std::abs(omega), q);
    return (omega > 0.0 ? epsilon * mag : -epsilon * mag);
}

struct ModeView {
    double K = 0.0;
    bool lane_emden = false;
};

ModeView view_of(const RadialMode& mode, const ProblemParams& params) {
    ModeView v;
    if (std::holds_alternative<LaneEmdenMode>(mode)) {
        v.K = lambda_of_beta(params.beta, params.p, params.N);
        v.lane_emden = true;
    } else {
        v.K = std::get<SpectralMode>(mode).lambda;
        v.lane_emden = false;
    }
    return v;
}

double second_derivative_impl(double theta, double omega, double domega,
                              const ProblemParams& params, int d, const ModeView& mv) {
    const double p = params.p;
    const double beta = params.beta;
    const double b2w2 = beta * beta * omega * omega;
    const double denom = b2w2 + (p - 1.0) * domega * domega;
    if (!(denom > 1e-300))
        throw IntegrationError("radial_second_derivative: singular denominator at theta = " +
                               std::to_string(theta));
    const double omega_sq = b2w2 + domega * domega;
    const double cot = std::cos(theta) / std::sin(theta);
    double num = (p - 2.0) * beta * beta * omega * domega * domega;
    num += omega_sq * ((d - 1.0) * cot * domega + beta * mv.K * omega);
    if (mv.lane_emden) {
        const double R = reaction_term(omega, params.q, params.epsilon);
        if (R != 0.0)
            num += R * pow_nonneg(omega_sq, 0.5 * (4.0 - p));
    }
    return -num / denom;
}

} // namespace

double big_omega(double beta, double omega, double domega) {
    return std::sqrt(beta * beta * omega * omega + domega * domega);
}

double radial_second_derivative(const RadialState& state, const ProblemParams& params,
                                const CapGeometry& geometry, const RadialMode& mode) {
    params.validate();
    geometry.validate();
    if (!(state.theta > 0.0) || !(state.theta < std::numbers::pi))
        throw std::invalid_argument("radial_second_derivative: theta must lie in (0, pi)");
    return second_derivative_impl(state.theta, state.omega, state.domega, params,
                                  geometry.d, view_of(mode, params));
}

double pole_second_derivative(double a, const ProblemParams& params,
                              const CapGeometry& geometry, const RadialMode& mode) {
    if (!(a > 0.0))
        throw std::invalid_argument("pole_second_derivative: need a > 0");
    const ModeView mv = view_of(mode, params);
    double forcing = params.beta * mv.K * a;
    if (mv.lane_emden)
        forcing += reaction_term(a, params.q, params.epsilon) *
                   pow_nonneg(params.beta * a * (params.beta * a), 0.5 * (2.0 - params.p));
    return -forcing / static_cast<double>(geometry.d);
}

RadialState pole_start(double a, const ProblemParams& params, const CapGeometry& geometry,
                       double h, const RadialMode& mode) {
    if (!(a > 0.0))
        throw std::invalid_argument("pole_start: need a > 0");
    if (!(h > 0.0) || !(h < geometry.theta0))
        throw std::invalid_argument("pole_start: need 0 < h < theta0");
    const double w2 = pole_second_derivative(a, params, geometry, mode);
    RadialState s;
    s.theta = h;
    s.omega = a + 0.5 * w2 * h * h;
    s.domega = w2 * h;
    return s;
}

namespace {

// Two-point quintic Hermite matching value, slope and curvature at both ends.
struct QuinticCell {
    double t0 = 0.0, H = 0.0;
    double c[6] = {0, 0, 0, 0, 0, 0};

    void fit(double t0_, double t1, double y0, double dy0, double d2y0,
             double y1, double dy1, double d2y1) {
        t0 = t0_;
        H = t1 - t0_;
        c[0] = y0;
        c[1] = dy0;
        c[2] = 0.5 * d2y0;
        const double A = y1 - (c[0] + c[1] * H + c[2] * H * H);
        const double BH = (dy1 - (c[1] + 2.0 * c[2] * H)) * H;
        const double CH2 = (d2y1 - 2.0 * c[2]) * H * H;
        c[3] = (10.0 * A - 4.0 * BH + 0.5 * CH2) / (H * H * H);
        c[4] = (-15.0 * A + 7.0 * BH - CH2) / (H * H * H * H);
        c[5] = (6.0 * A - 3.0 * BH + 0.5 * CH2) / (H * H * H * H * H);
    }

    double value(double t) const {
        const double s = t - t0;
        return c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
    }
    double slope(double t) const {
        const double s = t - t0;
        return c[1] + s * (2.0 * c[2] + s * (3.0 * c[3] + s * (4.0 * c[4] + s * 5.0 * c[5])));
    }
};

// Accepted integration nodes: theta, omega, omega', omega''.
struct StepMesh {
    std::vector<double> t, y, dy, d2y;

    void push(double theta, double omega, double domega, double d2omega) {
        t.push_back(theta);
        y.push_back(omega);
        dy.push_back(domega);
        d2y.push_back(d2omega);
    }

    QuinticCell cell(std::size_t k) const {
        QuinticCell q;
        q.fit(t[k], t[k + 1], y[k], dy[k], d2y[k], y[k + 1], dy[k + 1], d2y[k + 1]);
        return q;
    }

    std::size_t locate(double theta) const {
        auto it = std::upper_bound(t.begin(), t.end(), theta);
        std::size_t k = (it == t.begin()) ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
        return std::min(k, t.size() - 2);
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;
constexpr double C2 = 1.0 / 5.0, C3 = 3.0 / 10.0, C4 = 4.0 / 5.0, C5 = 8.0 / 9.0;

} // namespace

int RadialProfile::cell_index(double th) const {
    const std::size_t n = theta.size();
    if (n < 2) return 0;
    const double dt = theta[1] - theta[0];
    int k = static_cast<int>(std::floor((th - theta.front()) / dt));
    return std::clamp(k, 0, static_cast<int>(n) - 2);
}

double RadialProfile::omega_at(double th) const {
    if (theta.empty()) return 0.0;
    th = std::clamp(th, theta.front(), theta.back());
    const int k = cell_index(th);
    QuinticCell q;
    q.fit(theta[k], theta[k + 1], omega[k], domega[k], d2omega[k],
          omega[k + 1], domega[k + 1], d2omega[k + 1]);
    return q.value(th);
}

double RadialProfile::domega_at(double th) const {
    if (theta.empty()) return 0.0;
    th = std::clamp(th, theta.front(), theta.back());
    const int k = cell_index(th);
    QuinticCell q;
    q.fit(theta[k], theta[k + 1], omega[k], domega[k], d2omega[k],
          omega[k + 1], domega[k + 1], d2omega[k + 1]);
    return q.slope(th);
}

RadialProfile integrate_radial(double a, const ProblemParams& params,
                               const CapGeometry& geometry, const RadialMode& mode,
                               const IntegrateOptions& options) {
    params.validate();
    geometry.validate();
    if (!(a > 0.0))
        throw std::invalid_argument("integrate_radial: need a > 0");
    if (geometry.d != params.N - 1)
        throw std::invalid_argument("integrate_radial: geometry.d must equal N - 1");

    const double theta_end = options.theta_end > 0.0 ? options.theta_end : geometry.theta0;
    if (!(theta_end > 0.0) || !(theta_end < std::numbers::pi))
        throw std::invalid_argument("integrate_radial: theta_end must lie in (0, pi)");
    double h0 = options.pole_offset > 0.0 ? options.pole_offset
                                          : std::max(1e-6, theta_end * 1e-5);
    h0 = std::min(h0, 0.1 * theta_end);  // keep the series start inside tiny caps
    const ModeView mv = view_of(mode, params);
    const double atol = options.atol_scale * std::max(a, 1.0);
    const double span = theta_end - h0;
    // keep accepted steps a few dense cells wide so the C^2 joints of the
    // stored interpolant refine together with the grid
    const double h_max = std::min(span / 64.0, span * 8.0 / std::max(8, options.n_dense - 1));
    const double h_min = span * 1e-15;

    auto f = [&](double th, double w, double dw) {
        return second_derivative_impl(th, w, dw, params, geometry.d, mv);
    };

    RadialProfile profile;
    profile.params = params;
    profile.geometry = geometry;
    profile.mode = mode;
    profile.amplitude = a;

    StepMesh mesh;
    const RadialState start = pole_start(a, params, geometry, h0, mode);
    double th = start.theta, w = start.omega, dw = start.domega;
    mesh.push(th, w, dw, f(th, w, dw));

    Termination term = Termination::reached_end;
    double theta_stop = theta_end;
    std::string note;

    double h = std::min(h_max, span / 100.0);
    double k1 = mesh.d2y.back();
    long steps = 0;
    bool done = false;

    while (!done) {
        if (++steps > options.max_steps) {
            term = Termination::failed;
            note = "step cap exceeded at theta = " + std::to_string(th);
            theta_stop = th;
            break;
        }
        bool last = false;
        if (th + h >= theta_end) {
            h = theta_end - th;
            last = true;
        }

        // One Dormand-Prince step for the system (omega, omega').
        const double w2 = w + h * A21 * dw;
        const double d2 = dw + h * A21 * k1;
        const double k2 = f(th + C2 * h, w2, d2);
        const double w3 = w + h * (A31 * dw + A32 * d2);
        const double d3 = dw + h * (A31 * k1 + A32 * k2);
        const double k3 = f(th + C3 * h, w3, d3);
        const double w4 = w + h * (A41 * dw + A42 * d2 + A43 * d3);
        const double d4 = dw + h * (A41 * k1 + A42 * k2 + A43 * k3);
        const double k4 = f(th + C4 * h, w4, d4);
        const double w5 = w + h * (A51 * dw + A52 * d2 + A53 * d3 + A54 * d4);
        const double d5 = dw + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        const double k5 = f(th + C5 * h, w5, d5);
        const double w6 = w + h * (A61 * dw + A62 * d2 + A63 * d3 + A64 * d4 + A65 * d5);
        const double d6 = dw + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        const double k6 = f(th + h, w6, d6);
        const double w_new = w + h * (B1 * dw + B3 * d3 + B4 * d4 + B5 * d5 + B6 * d6);
        const double d_new = dw + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        const double k7 = f(th + h, w_new, d_new);

        const double ew = h * (E1 * dw + E3 * d3 + E4 * d4 + E5 * d5 + E6 * d6 + E7 * d_new);
        const double ed = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        const double scw = atol + options.rtol * std::max(std::abs(w), std::abs(w_new));
        const double scd = atol + options.rtol * std::max(std::abs(dw), std::abs(d_new));
        const double err = std::sqrt(0.5 * ((ew / scw) * (ew / scw) + (ed / scd) * (ed / scd)));

        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < h_min) {
                term = Termination::failed;
                note = "step-size underflow at theta = " + std::to_string(th);
                theta_stop = th;
                break;
            }
            continue;
        }

        mesh.push(th + h, w_new, d_new, k7);

        // Zero-crossing scan on the fresh quintic cell.
        const QuinticCell cell = mesh.cell(mesh.t.size() - 2);
        double s_neg = -1.0;
        double s_pos = 0.0;
        for (int j = 1; j <= 8; ++j) {
            const double s = th + h * (j / 8.0);
            const double v = (j == 8) ? w_new : cell.value(s);
            if (v <= 0.0) {
                s_neg = s;
                break;
            }
            s_pos = s;
        }
        if (s_neg >= 0.0) {
            double lo = (s_pos > 0.0) ? s_pos : th;
            double hi = s_neg;
            while (hi - lo > options.event_theta_tol) {
                const double mid = 0.5 * (lo + hi);
                if (cell.value(mid) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            const double tz = hi;
            // replace the last mesh node with the event state
            mesh.t.back() = tz;
            mesh.y.back() = std::max(0.0, cell.value(tz));
            mesh.dy.back() = cell.slope(tz);
            mesh.d2y.back() = f(tz, mesh.y.back(), mesh.dy.back());
            term = Termination::hit_zero;
            theta_stop = tz;
            break;
        }

        if (std::abs(w_new) > options.overflow_guard || std::abs(d_new) > options.overflow_guard) {
            term = Termination::blew_up;
            theta_stop = th + h;
            break;
        }

        th += h;
        w = w_new;
        dw = d_new;
        k1 = k7;
        if (last) {
            theta_stop = theta_end;
            done = true;
        } else {
            h = std::min(h_max, h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2))));
        }
    }

    profile.termination = term;
    profile.theta_stop = theta_stop;
    profile.note = note;

    // Uniform dense grid over [0, theta_stop]; below the series offset the
    // pole expansion supplies the values.
    const int n = std::max(options.n_dense, 9);
    const double dt = theta_stop / static_cast<double>(n - 1);
    const double w2pole = pole_second_derivative(a, params, geometry, mode);
    profile.theta.resize(n);
    profile.omega.resize(n);
    profile.domega.resize(n);
    profile.d2omega.resize(n);
    for (int i = 0; i < n; ++i) {
        const double ti = (i == n - 1) ? theta_stop : dt * i;
        profile.theta[i] = ti;
        if (ti <= mesh.t.front()) {
            profile.omega[i] = a + 0.5 * w2pole * ti * ti;
            profile.domega[i] = w2pole * ti;
            profile.d2omega[i] = w2pole;
        } else {
            const std::size_t k = mesh.locate(ti);
            const QuinticCell cell = mesh.cell(k);
            profile.omega[i] = cell.value(ti);
            profile.domega[i] = cell.slope(ti);
            profile.d2omega[i] = 0.0;  // filled below from the equation
        }
    }
    // terminal node carries the terminating state exactly
    profile.omega[n - 1] = mesh.y.back();
    profile.domega[n - 1] = mesh.dy.back();
    for (int i = 0; i < n; ++i) {
        const double ti = profile.theta[i];
        if (ti <= mesh.t.front()) continue;
        profile.d2omega[i] = second_derivative_impl(ti, profile.omega[i], profile.domega[i],
                                                    params, geometry.d, mv);
    }
    return profile;
}

void rebuild_curvatures(RadialProfile& profile) {
    const ModeView mv = view_of(profile.mode, profile.params);
    const int n = static_cast<int>(profile.theta.size());
    profile.d2omega.resize(n);
    const double w2pole =
        pole_second_derivative(profile.amplitude, profile.params, profile.geometry, profile.mode);
    for (int i = 0; i < n; ++i) {
        if (profile.theta[i] <= 0.0) {
            profile.d2omega[i] = w2pole;
            continue;
        }
        profile.d2omega[i] =
            second_derivative_impl(profile.theta[i], profile.omega[i], profile.domega[i],
                                   profile.params, profile.geometry.d, mv);
    }
}

double divergence_residual(const RadialProfile& profile) {
    const auto& th = profile.theta;
    const int n = static_cast<int>(th.size());
    if (n < 7)
        throw std::invalid_argument("divergence_residual: profile grid too small");
    const ProblemParams& params = profile.params;
    const int d = profile.geometry.d;
    const ModeView mv = view_of(profile.mode, params);
    const double p = params.p;
    const double beta = params.beta;
    const double dt = th[1] - th[0];

    std::vector<double> flux(n);
    for (int i = 0; i < n; ++i) {
        const double om = profile.omega[i];
        const double dom = profile.domega[i];
        const double osq = beta * beta * om * om + dom * dom;
        flux[i] = std::pow(std::sin(th[i]), d - 1) * pow_nonneg(osq, 0.5 * (p - 2.0)) * dom;
    }

    // The first percent of the domain is excluded (the flux vanishes like
    // theta^d there and dividing the stencil error by sin^{d-1} would swamp
    // the interior signal), as is the last half percent, where event location
    // shortens the final integration cell.
    const double theta_lo = 0.01 * profile.theta_stop;
    const double theta_hi = 0.995 * profile.theta_stop;
    double worst = 0.0;
    for (int i = 2; i + 2 < n; ++i) {
        if (th[i] < theta_lo || th[i] > theta_hi) continue;
        const double om = profile.omega[i];
        const double dom = profile.domega[i];
        const double osq = beta * beta * om * om + dom * dom;
        const double weight = std::pow(std::sin(th[i]), d - 1);
        const double dflux = (flux[i - 2] - 8.0 * flux[i - 1] + 8.0 * flux[i + 1] - flux[i + 2]) /
                             (12.0 * dt);
        double res = -dflux / weight - beta * mv.K * pow_nonneg(osq, 0.5 * (p - 2.0)) * om;
        if (mv.lane_emden)
            res -= reaction_term(om, params.q, params.epsilon);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace capsep
