#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capsep/params.hpp"
#include "capsep/spectral.hpp"

using namespace capsep;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("lambda_beta half-sphere linear oracle") {
    const CapGeometry geo{2, kPi / 2.0};
    for (double beta : {0.5, 1.0, 2.0}) {
        const SpectralResult res = lambda_beta(beta, 2.0, geo, 1e-9);
        CHECK(res.value == doctest::Approx(2.0 / beta).epsilon(1e-8));
        CHECK(res.value > 0.0);
        CHECK(res.bracket_hi - res.bracket_lo <= 1e-9);
    }
    const CapGeometry geo4{4, kPi / 2.0};
    const SpectralResult res = lambda_beta(1.0, 2.0, geo4, 1e-9);
    CHECK(res.value == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("lambda_beta matches the finite-difference eigenvalue on caps") {
    for (double theta0 : {kPi / 4.0, kPi / 3.0}) {
        const CapGeometry geo{3, theta0};
        const double lam1 = linear_cap_eigenvalue(geo, 4096);
        for (double beta : {0.7, 1.3}) {
            const SpectralResult res = lambda_beta(beta, 2.0, geo, 1e-9);
            CHECK(beta * res.value == doctest::Approx(lam1).epsilon(1e-4));
        }
    }
}

TEST_CASE("lambda_beta decreases in beta") {
    const CapGeometry geo{2, 1.1};
    const double l1 = lambda_beta(1.0, 2.6, geo, 1e-8).value;
    const double l2 = lambda_beta(2.0, 2.6, geo, 1e-8).value;
    CHECK(l2 < l1);
}

TEST_CASE("beta_S on the half-sphere equals N-1 for p = 2") {
    for (int N : {3, 4, 5, 6}) {
        const CapGeometry geo{N - 1, kPi / 2.0};
        const SpectralResult res = beta_S(2.0, geo, 1e-8);
        CHECK(res.value == doctest::Approx(N - 1.0).epsilon(1e-6));
        // the algebraic oracle: beta (beta + 2 - N) = N - 1 at beta = N - 1
        CHECK((N - 1.0) * ((N - 1.0) + 2.0 - N) == doctest::Approx(N - 1.0));
    }
}

TEST_CASE("smaller caps push the spectral exponent up") {
    const CapGeometry half{2, kPi / 2.0};
    const CapGeometry cap{2, kPi / 3.0};
    CHECK(beta_S(2.0, cap, 1e-7).value > beta_S(2.0, half, 1e-7).value);
}

TEST_CASE("the equivalence flips across beta_S") {
    const CapGeometry geo{2, 1.2};
    for (double p : {1.6, 2.0, 2.5}) {
        const double bs = beta_S(p, geo, 1e-8).value;
        const double below = lambda_beta(0.9 * bs, p, geo, 1e-9).value;
        const double above = lambda_beta(1.1 * bs, p, geo, 1e-9).value;
        CHECK(below > lambda_of_beta(0.9 * bs, p, geo.d + 1));
        CHECK(above < lambda_of_beta(1.1 * bs, p, geo.d + 1));
    }
}

TEST_CASE("linear cap eigenvalue closed forms") {
    CHECK(linear_cap_eigenvalue({2, kPi / 2.0}, 2048) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(linear_cap_eigenvalue({4, kPi / 2.0}, 2048) == doctest::Approx(4.0).epsilon(1e-5));
    // the eigenvalue of the near-full sphere collapses towards zero
    const double a = linear_cap_eigenvalue({2, 2.0}, 1024);
    const double b = linear_cap_eigenvalue({2, 2.6}, 1024);
    const double c = linear_cap_eigenvalue({2, 3.0}, 1024);
    CHECK(a > b);
    CHECK(b > c);
    CHECK(c < 0.5);
    CHECK_THROWS_AS(linear_cap_eigenvalue({2, 1.0}, 16), std::invalid_argument);
}

TEST_CASE("lambda_1_beta reproduces the p = 2 shift identity") {
    for (double theta0 : {kPi / 2.0, kPi / 3.0}) {
        const CapGeometry geo{2, theta0};
        const double lam1 = linear_cap_eigenvalue(geo, 512);
        for (double beta : {0.5, 1.5}) {
            const SpectralResult res = lambda_1_beta(beta, 2.0, geo, 512);
            CHECK(res.value == doctest::Approx(lam1 + beta * beta).epsilon(1e-4));
        }
    }
}

TEST_CASE("lambda_1_beta dominates beta^p") {
    const CapGeometry geo{2, kPi / 2.0};
    for (double p : {1.5, 2.0, 3.0})
        for (double beta : {0.5, 1.0, 2.0}) {
            const SpectralResult res = lambda_1_beta(beta, p, geo, 192);
            CHECK(res.value >= std::pow(beta, p));
            CHECK(res.value > 0.0);
        }
}

TEST_CASE("continuation table through the p = 2 anchor") {
    const CapGeometry geo{2, kPi / 2.0};
    std::vector<double> grid;
    for (double p = 1.8; p <= 2.2 + 1e-12; p += 0.1)
        grid.push_back(p);
    const ContinuationTable table = beta_S_continuation(grid, geo, 1e-7);
    REQUIRE(table.entries.size() == grid.size());
    bool found_p2 = false;
    for (const auto& e : table.entries)
        if (std::abs(e.p - 2.0) < 1e-12) {
            CHECK(e.beta_S == doctest::Approx(2.0).epsilon(1e-5));
            found_p2 = true;
        }
    CHECK(found_p2);
    CHECK(table.max_slope < 10.0);
    CHECK(table.max_slope > 0.0);

    std::vector<double> bad = {2.0, 1.5};
    CHECK_THROWS_AS(beta_S_continuation(bad, geo, 1e-7), std::invalid_argument);
}
