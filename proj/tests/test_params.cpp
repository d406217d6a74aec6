#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "capsep/params.hpp"

using namespace capsep;

TEST_CASE("lambda_of_beta direct values") {
    CHECK(lambda_of_beta(1.0, 2.0, 3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lambda_of_beta(2.0, 3.0, 5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(lambda_of_beta(-1.0, 2.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(lambda_of_beta(1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("lambda_of_beta is affine with slope p-1") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> pd(1.1, 4.0), bd(0.1, 8.0);
    for (int k = 0; k < 50; ++k) {
        const double p = pd(rng), b = bd(rng);
        const double slope = (lambda_of_beta(b + 0.5, p, 4) - lambda_of_beta(b, p, 4)) / 0.5;
        CHECK(slope == doctest::Approx(p - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("lambda at the critical exponent matches the factored substitution") {
    // the factored identity rests on p beta_c + p - N = -1 and beta_c + 1 = (N-1)/p
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> pd(1.1, 2.8);
    for (int N : {4, 5, 6}) {
        for (int k = 0; k < 20; ++k) {
            const double p = pd(rng);
            if (!(p < N - 1)) continue;
            const double bc = beta_critical(p, N);
            CHECK(p * bc + p - N == doctest::Approx(-1.0).epsilon(1e-13));
            CHECK(lambda_of_beta(bc, p, N) ==
                  doctest::Approx((1.0 - N) / p).epsilon(1e-13));
        }
    }
}

TEST_CASE("beta_q values and inverse relation") {
    CHECK(beta_q(3.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_q(5.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(beta_q(1.0, 2.0), std::invalid_argument);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> pd(1.1, 4.0), qexc(0.05, 6.0);
    for (int k = 0; k < 100; ++k) {
        const double p = pd(rng);
        const double q = p - 1.0 + qexc(rng);
        const double b = beta_q(q, p);
        CHECK(q_from_beta(b, p) + 1.0 == doctest::Approx(p * (1.0 + b) / b).epsilon(1e-14));
        CHECK(q_from_beta(b, p) == doctest::Approx(q).epsilon(1e-12));
        // strictly decreasing in q
        CHECK(beta_q(q + 0.1, p) < b);
    }
}

TEST_CASE("q_critical values and infinite sentinel") {
    CHECK(q_critical(2.0, 4) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(q_critical(2.0, 5) == doctest::Approx(3.0).epsilon(1e-15));
    const double inf = q_critical(3.0, 4);
    CHECK(std::isinf(inf));
    CHECK(inf > 0.0);
    // total comparisons against the sentinel
    CHECK(inf > 1e308);
    CHECK_FALSE(inf < q_critical(2.0, 4));
    CHECK(std::isinf(q_critical(2.5, 3)));
}

TEST_CASE("q_critical maps to beta_critical under beta_q") {
    for (auto [p, N] : {std::pair{2.0, 4}, {2.0, 5}, {2.5, 5}, {3.0, 6}}) {
        const double qc = q_critical(p, N);
        CHECK(beta_q(qc, p) == doctest::Approx(beta_critical(p, N)).epsilon(1e-13));
    }
}

TEST_CASE("beta_critical values and the shift identity") {
    CHECK(beta_critical(2.0, 4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(beta_critical(2.0, 5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(beta_critical(3.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(beta_critical(2.0, 3), std::invalid_argument);

    std::mt19937 rng(19);
    std::uniform_real_distribution<double> pd(1.05, 4.0);
    for (int N : {4, 5, 6, 8}) {
        for (int k = 0; k < 25; ++k) {
            const double p = pd(rng);
            if (!(p < N - 1)) continue;
            CHECK(beta_critical(p, N) + 1.0 == doctest::Approx((N - 1.0) / p).epsilon(1e-13));
        }
    }
}

TEST_CASE("pohozaev coefficients at the hand-evaluated point") {
    ProblemParams params;
    params.p = 2.0;
    params.q = 3.0;
    params.beta = 1.0;
    params.N = 4;
    const PohozaevCoeffs c = pohozaev_coeffs(params);
    CHECK(c.A == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(c.B == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.C == doctest::Approx(1.5).epsilon(1e-15));

    const PohozaevCoeffs f = pohozaev_coeffs_factored(1.0, 2.0, 4);
    CHECK(f.A == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(f.B == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.C == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("coefficients vanish together at criticality") {
    for (auto [p, N] : {std::pair{2.0, 4}, {2.0, 5}, {2.5, 5}, {3.0, 6}}) {
        const double bc = beta_critical(p, N);
        ProblemParams params;
        params.p = p;
        params.q = q_critical(p, N);
        params.beta = bc;
        params.N = N;
        const PohozaevCoeffs c = pohozaev_coeffs(params);
        CHECK(std::abs(c.A) <= 1e-12);
        CHECK(std::abs(c.B) <= 1e-12);
        CHECK(std::abs(c.C) <= 1e-12);
        const PohozaevCoeffs f = pohozaev_coeffs_factored(bc, p, N);
        CHECK(std::abs(f.A) <= 1e-12);
        CHECK(std::abs(f.B) <= 1e-12);
        CHECK(std::abs(f.C) <= 1e-12);
    }
}

TEST_CASE("expanded and factored forms agree under the coupling") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> bd(0.05, 10.0), pd(1.05, 3.9);
    int tested = 0;
    while (tested < 100) {
        const int N = 4 + static_cast<int>(rng() % 4);
        const double p = pd(rng);
        if (!(p < N - 1)) continue;
        const double b = bd(rng);
        ProblemParams params;
        params.p = p;
        params.q = q_from_beta(b, p);
        params.beta = b;
        params.N = N;
        const PohozaevCoeffs e = pohozaev_coeffs(params);
        const PohozaevCoeffs f = pohozaev_coeffs_factored(b, p, N);
        const double scale = std::max({std::abs(e.A), std::abs(e.B), std::abs(e.C), 1.0});
        CHECK(std::abs(e.A - f.A) <= 1e-12 * scale);
        CHECK(std::abs(e.B - f.B) <= 1e-12 * scale);
        CHECK(std::abs(e.C - f.C) <= 1e-12 * scale);
        ++tested;
    }
}

TEST_CASE("away from criticality the triple is never componentwise nonnegative") {
    for (auto [p, N] : {std::pair{2.0, 4}, {2.0, 5}, {2.5, 5}, {3.0, 6}}) {
        const double bc = beta_critical(p, N);
        for (double shift : {-0.8, -0.3, -0.05, 0.05, 0.3, 0.8, 2.0}) {
            const double b = bc + shift;
            if (!(b > 0.0)) continue;
            const PohozaevCoeffs f = pohozaev_coeffs_factored(b, p, N);
            CHECK((f.A < 0.0 || f.B < 0.0 || f.C < 0.0));
        }
    }
}

TEST_CASE("ProblemParams validation") {
    ProblemParams params;
    params.p = 2.0;
    params.q = 3.0;
    params.beta = 1.0;
    params.N = 4;
    CHECK_NOTHROW(params.validate());
    CHECK(params.d() == 3);

    ProblemParams bad = params;
    bad.epsilon = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params;
    bad.q = bad.p - 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = params;
    bad.N = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
