#include "capsep/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace capsep {

void CapGeometry::validate() const {
    if (d < 2)
        throw std::invalid_argument("CapGeometry: need d >= 2, got d = " + std::to_string(d));
    if (!(theta0 > 0.0) || !(theta0 < std::numbers::pi))
        throw std::invalid_argument("CapGeometry: need 0 < theta0 < pi, got theta0 = " +
                                    std::to_string(theta0));
}

double surface_area_unit_sphere(int m) {
    if (m < 1)
        throw std::invalid_argument("surface_area_unit_sphere: need m >= 1");
    const double half = 0.5 * static_cast<double>(m);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double laplace_beltrami_radial(const RadialTestFunction& f, double theta, int d) {
    if (!(theta > 0.0) || !(theta < std::numbers::pi))
        throw std::invalid_argument("laplace_beltrami_radial: theta must lie in (0, pi)");
    return f.d2phi(theta) + (d - 1.0) * (std::cos(theta) / std::sin(theta)) * f.dphi(theta);
}

double WeightedGrid::integrate(const std::vector<double>& f) const {
    if (f.size() != nodes.size())
        throw std::invalid_argument("WeightedGrid::integrate: value array size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += weights[i] * f[i];
    return acc;
}

double WeightedGrid::integrate(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * f(nodes[i]);
    return acc;
}

WeightedGrid make_weighted_grid(const CapGeometry& geometry, int n, double theta_min) {
    geometry.validate();
    if (n < 16)
        throw std::invalid_argument("make_weighted_grid: need n >= 16");
    if (!(theta_min >= 0.0) || !(theta_min < geometry.theta0))
        throw std::invalid_argument("make_weighted_grid: need 0 <= theta_min < theta0");

    int count = (n % 2 == 0) ? n + 1 : n;  // odd node count closes Simpson
    const double h = (geometry.theta0 - theta_min) / static_cast<double>(count - 1);

    WeightedGrid grid;
    grid.d = geometry.d;
    grid.theta_min = theta_min;
    grid.theta0 = geometry.theta0;
    grid.surface_factor = surface_area_unit_sphere(geometry.d);
    grid.nodes.resize(count);
    grid.weights.resize(count);
    for (int i = 0; i < count; ++i) {
        const double theta = theta_min + h * i;
        double simpson;
        if (i == 0 || i == count - 1)
            simpson = 1.0;
        else if (i % 2 == 1)
            simpson = 4.0;
        else
            simpson = 2.0;
        grid.nodes[i] = theta;
        grid.weights[i] = (h / 3.0) * simpson * std::pow(std::sin(theta), geometry.d - 1);
    }
    return grid;
}

} // namespace capsep
