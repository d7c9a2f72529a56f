#include <doctest.h>

#include "hadamard/curvature.hpp"
#include "hadamard/quadrature.hpp"

#include <cmath>

using namespace hadamard;

TEST_CASE("closed-form profiles evaluate exactly") {
    CHECK(CurvatureProfile::constant(1.0)(5.0) == 1.0);
    CHECK(CurvatureProfile::power(2.0)(3.0) == 9.0);
    CHECK(CurvatureProfile::exponential(1.0)(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

    // deterministic: repeated calls bit-match
    auto p = CurvatureProfile::exponential(0.7, 1.3);
    CHECK(p(3.7) == p(3.7));
}

TEST_CASE("profile constructors reject bad parameters") {
    CHECK_THROWS_AS(CurvatureProfile::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureProfile::power(0.5), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureProfile::exponential(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(CurvatureProfile::tabulated({0.0, 1.0}, {1.0, -2.0}), std::invalid_argument);
}

TEST_CASE("tabulated profiles interpolate monotonically and stay bounded") {
    auto p = CurvatureProfile::tabulated({0, 1, 2, 3}, {1, 1, 4, 9});
    CHECK(p(0.5) == doctest::Approx(1.0).epsilon(1e-12)); // flat segment: no overshoot
    CHECK(p(2.0) == doctest::Approx(4.0).epsilon(1e-12));
    for (double t = 0; t <= 3.0; t += 0.01) {
        CHECK(p(t) >= 1.0 - 1e-12);
        CHECK(p(t) <= 9.0 + 1e-12);
    }
    CHECK_THROWS_AS(p(3.5), std::out_of_range);
}

TEST_CASE("check_c32 classifies the reference profiles") {
    auto probes = geometric_probes(0.5, 1000.0);

    // power laws satisfy the condition: ratio ~ k theta^{-k/2-1} -> 0
    for (double k : {1.0, 2.0, 4.0}) {
        auto v = check_c32(CurvatureProfile::power(k), probes);
        CHECK(v.satisfied());
    }
    // exponential: ratio = beta e^{-beta theta/2} -> 0
    CHECK(check_c32(CurvatureProfile::exponential(1.0), geometric_probes(0.5, 100.0)).satisfied());

    // constants fail the lower-Dini-positivity half
    auto v = check_c32(CurvatureProfile::constant(1.0), probes);
    CHECK(v.violated());

    CHECK_THROWS_AS(check_c32(CurvatureProfile::constant(1.0), {3.0, 2.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("running_max: identity on monotone, running max otherwise") {
    auto pw = CurvatureProfile::power(2.0);
    auto same = running_max(pw, 50.0);
    CHECK(same(7.0) == doctest::Approx(49.0).epsilon(1e-12));

    auto tab = running_max(CurvatureProfile::tabulated({0, 1, 2}, {2, 1, 3}), 2.0);
    CHECK(tab(0.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(tab(1.0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(tab(2.0) == doctest::Approx(3.0).epsilon(1e-10));

    // oscillating profile: brute-force oracle on a fine grid
    auto osc = CurvatureProfile::tabulate([](double t) { return 2 + std::sin(t); }, 10.0, 4097);
    auto rm = running_max(osc, 10.0);
    for (double t = 0.05; t <= 10.0; t += 0.173) {
        double brute = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double u = t * i / 4000;
            brute = std::max(brute, 2 + std::sin(u));
        }
        CHECK(rm(t) == doctest::Approx(brute).epsilon(1e-5));
        CHECK(rm(t) >= osc(t) - 1e-9);
    }
    // non-decreasing at every sampled pair
    double prev = rm(0.0);
    for (double t = 0.01; t <= 10.0; t += 0.01) {
        CHECK(rm(t) >= prev - 1e-12);
        prev = rm(t);
    }
}
