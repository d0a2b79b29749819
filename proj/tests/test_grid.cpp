#include "doctest.h"

#include <cmath>

#include "spdefd/grid.hpp"

using namespace spdefd;

TEST_CASE("uniform grid construction") {
    const Grid g = build_uniform(-16.0 / 3.0, 16.0, 16);
    CHECK(g.h == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(g.x[0] == doctest::Approx(-16.0 / 3.0));
    CHECK(g.x[16] == 16.0);

    const Grid q = build_uniform(0.0, 16.0, 10);
    CHECK(q.h == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(q.x[5] == doctest::Approx(8.0).epsilon(1e-14));

    const Grid s = build_uniform(0.0, 1.0, 2);
    CHECK(s.x[0] == 0.0);
    CHECK(s.x[1] == 0.5);
    CHECK(s.x[2] == 1.0);

    CHECK_THROWS_AS(build_uniform(0.0, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(build_uniform(1.0, 0.0, 4), std::domain_error);
}

TEST_CASE("stretched grid with alpha = 1 equals the uniform grid") {
    ModelParams p;
    const Grid a = build_uniform(0.0, 16.0, 10);
    const Grid b = build_stretched(16.0, 10, 1.0, p);
    REQUIRE(a.J == b.J);
    for (int j = 0; j <= a.J; ++j) CHECK(std::abs(a.x[j] - b.x[j]) < 1e-14);
    CHECK(b.uniform());
}

TEST_CASE("square-root stretching nodes and coefficients") {
    ModelParams p;
    p.mu = 0.081;
    const Grid g = build_stretched(16.0, 4, 0.5, p);
    CHECK(g.h == doctest::Approx(1.0).epsilon(1e-15));
    for (int j = 0; j <= 4; ++j) {
        CHECK(g.y[j] == doctest::Approx(static_cast<double>(j)).epsilon(1e-14));
        CHECK(g.x[j] == doctest::Approx(static_cast<double>(j * j)).epsilon(1e-13));
    }
    for (int j = 1; j < 4; ++j) {
        const double yj = g.y[j];
        CHECK(g.noise_scale[j - 1] == doctest::Approx(1.0 / (2.0 * yj)).epsilon(1e-13));
        const double expected_b = -p.mu / (2.0 * yj) - 1.0 / (8.0 * yj * yj * yj);
        CHECK(g.drift_coef[j - 1] == doctest::Approx(expected_b).epsilon(1e-13));
    }
}

TEST_CASE("stretched grid coefficient cross-check by finite differences") {
    ModelParams p;
    p.mu = 0.3;
    for (double alpha : {0.5, 0.75}) {
        const Grid g = build_stretched(16.0, 32, alpha, p);
        for (int j = 1; j < g.J; ++j) {
            const double xj = g.x[j];
            const auto fd_error = [&](double delta) {
                const double fd = (std::pow(xj + delta, alpha) - std::pow(xj - delta, alpha)) /
                                  (2.0 * delta);
                return std::abs(g.noise_scale[j - 1] - fd);
            };
            // halving delta shrinks the symmetric-difference error fourfold
            const double coarse = fd_error(1e-3 * xj);
            const double fine = fd_error(5e-4 * xj);
            if (coarse < 1e-12) continue; // below the rounding floor
            const double order = coarse / fine;
            CHECK(order > 3.5);
            CHECK(order < 4.5);
        }
    }
}

TEST_CASE("stretched grid round trip and monotonicity") {
    ModelParams p;
    const Grid g = build_stretched(16.0, 25, 0.5, p);
    for (int j = 1; j <= g.J; ++j) {
        CHECK(g.x[j] > g.x[j - 1]);
        // g(f(x)) = x
        CHECK(std::pow(std::pow(g.x[j], 0.5), 2.0) == doctest::Approx(g.x[j]).epsilon(1e-12));
    }
}

TEST_CASE("stretched grid rejects bad exponents") {
    ModelParams p;
    CHECK_THROWS_AS(build_stretched(16.0, 10, 0.0, p), std::domain_error);
    CHECK_THROWS_AS(build_stretched(16.0, 10, -0.5, p), std::domain_error);
    CHECK_THROWS_AS(build_stretched(16.0, 10, 1.5, p), std::domain_error);
}
