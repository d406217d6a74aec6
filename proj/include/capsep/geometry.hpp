// Spherical cap geometry, radial differential operators on S^d, and the
// sin^{d-1}-weighted quadrature backing every cap integral in the toolkit.

#ifndef CAPSEP_GEOMETRY_HPP
#define CAPSEP_GEOMETRY_HPP

#include <functional>
#include <vector>

namespace capsep {

/// Spherical cap S(theta0) about a pole of S^d, 0 < theta0 < pi.
/// The boundary is the parallel theta = theta0; the outward normal there is
/// the theta direction.
struct CapGeometry {
    int d = 2;                ///< sphere dimension, >= 2
    double theta0 = 1.5707963267948966;  ///< cap half-angle in radians

    void validate() const;    ///< throws std::invalid_argument when invalid
};

/// A radial scalar field on the sphere with analytic derivatives in theta.
struct RadialTestFunction {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> d2phi;
};

/// (m-1)-area of the unit sphere S^{m-1}: 2 pi^{m/2} / Gamma(m/2).
double surface_area_unit_sphere(int m);

/// Laplace-Beltrami operator of a radial function on S^d:
/// phi''(theta) + (d-1) cot(theta) phi'(theta). Singular at theta in {0, pi};
/// callers take pole limits themselves.
double laplace_beltrami_radial(const RadialTestFunction& f, double theta, int d);

/// Composite-Simpson quadrature nodes and weights for the weighted integral
/// int_{theta_min}^{theta0} f(theta) sin^{d-1}(theta) dtheta. Weights carry
/// the sin^{d-1} factor, so sum(w_i f(x_i)) approximates the integral.
/// surface_factor is sigma_{d-1} = |S^{d-1}|; cap integrals are
/// surface_factor * integrate(f) and the boundary integral of g is
/// surface_factor * sin^{d-1}(theta0) * g(theta0).
struct WeightedGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double surface_factor = 0.0;
    int d = 2;
    double theta_min = 0.0;
    double theta0 = 0.0;

    double integrate(const std::vector<double>& f) const;
    double integrate(const std::function<double(double)>& f) const;
};

/// Builds the grid with at least n nodes (rounded up to an odd count so the
/// composite Simpson rule closes). Requires n >= 16 and 0 <= theta_min < theta0.
WeightedGrid make_weighted_grid(const CapGeometry& geometry, int n, double theta_min = 0.0);

} // namespace capsep

#endif
