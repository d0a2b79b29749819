#include "doctest.h"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "spdefd/errors.hpp"
#include "spdefd/operators.hpp"
#include "spdefd/random.hpp"
#include "spdefd/scheme.hpp"

using namespace spdefd;

namespace {

Eigen::MatrixXd dense_of(const TridiagonalMatrix& m) {
    const Eigen::Index n = m.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = m.diag[i];
        if (i > 0) a(i, i - 1) = m.lower[i];
        if (i + 1 < n) a(i, i + 1) = m.upper[i];
    }
    if (m.periodic) {
        a(0, n - 1) += m.corner_lower;
        a(n - 1, 0) += m.corner_upper;
    }
    return a;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint32_t tag) {
    const NormalStream s{777, tag, 0, StreamPurpose::Generic};
    Eigen::VectorXd v(n);
    s.fill(v);
    return v;
}

} // namespace

TEST_CASE("difference stencil values") {
    Eigen::Vector3d v(1.0, 2.0, 3.0);
    const Eigen::VectorXd d1 = apply_d1(v, Boundary::DirichletZero);
    CHECK(d1[1] == 2.0);          // 3 - 1
    CHECK(d1[0] == 2.0);          // ghost zero on the left
    CHECK(d1[2] == -2.0);         // ghost zero on the right

    Eigen::Vector3d w(0.0, 1.0, 0.0);
    const Eigen::VectorXd d2 = apply_d2(w, Boundary::DirichletZero);
    CHECK(d2[1] == -2.0);
}

TEST_CASE("difference operators annihilate constants and affine fields") {
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(12, 3.7);
    CHECK(apply_d1(c, Boundary::Periodic).cwiseAbs().maxCoeff() == 0.0);
    CHECK(apply_d2(c, Boundary::Periodic).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd lin(9);
    for (int j = 0; j < 9; ++j) lin[j] = 0.4 + 1.3 * j;
    const Eigen::VectorXd d2 = apply_d2(lin, Boundary::DirichletZero);
    for (int j = 2; j < 7; ++j) CHECK(std::abs(d2[j]) < 1e-13);
}

TEST_CASE("difference operators on trigonometric modes") {
    const int J = 16;
    const double phi = 2.0 * std::numbers::pi / J;
    Eigen::VectorXd s(J), c(J);
    for (int j = 0; j < J; ++j) {
        s[j] = std::sin(j * phi);
        c[j] = std::cos(j * phi);
    }
    const Eigen::VectorXd d1 = apply_d1(s, Boundary::Periodic);
    const Eigen::VectorXd d2 = apply_d2(c, Boundary::Periodic);
    for (int j = 0; j < J; ++j) {
        CHECK(d1[j] == doctest::Approx(2.0 * std::sin(phi) * std::cos(j * phi)).epsilon(1e-12));
        const double sh = std::sin(0.5 * phi);
        CHECK(d2[j] == doctest::Approx(-4.0 * sh * sh * std::cos(j * phi)).epsilon(1e-12));
    }
}

TEST_CASE("iterated first difference doubles the stencil") {
    const Eigen::VectorXd v = random_vector(20, 1);
    const Eigen::VectorXd twice = apply_d1(apply_d1(v, Boundary::Periodic), Boundary::Periodic);
    const Eigen::VectorXd direct = apply_d1_twice(v, Boundary::Periodic);
    CHECK((twice - direct).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("periodic operators have zero column sums") {
    const Eigen::VectorXd v = random_vector(33, 2);
    CHECK(std::abs(apply_d1(v, Boundary::Periodic).sum()) < 1e-12);
    CHECK(std::abs(apply_d2(v, Boundary::Periodic).sum()) < 1e-12);
    CHECK(std::abs(apply_d1_twice(v, Boundary::Periodic).sum()) < 1e-12);
}

TEST_CASE("thomas solve on small fixed systems") {
    TridiagonalMatrix id;
    id.lower = Eigen::VectorXd::Zero(4);
    id.diag = Eigen::VectorXd::Ones(4);
    id.upper = Eigen::VectorXd::Zero(4);
    const Eigen::VectorXd rhs = random_vector(4, 3);
    CHECK((solve_tridiagonal(id, rhs) - rhs).cwiseAbs().maxCoeff() < 1e-15);

    TridiagonalMatrix m;
    m.lower = Eigen::VectorXd::Constant(3, -1.0);
    m.diag = Eigen::VectorXd::Constant(3, 2.0);
    m.upper = Eigen::VectorXd::Constant(3, -1.0);
    Eigen::Vector3d b(1.0, 0.0, 0.0);
    const Eigen::VectorXd x = solve_tridiagonal(m, b);
    CHECK(x[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x[2] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("thomas solve matches dense elimination on random dominant systems") {
    for (int trial = 0; trial < 12; ++trial) {
        const Eigen::Index n = 10 + 7 * trial;
        TridiagonalMatrix m;
        m.lower = random_vector(n, static_cast<std::uint32_t>(100 + trial));
        m.upper = random_vector(n, static_cast<std::uint32_t>(200 + trial));
        m.diag = random_vector(n, static_cast<std::uint32_t>(300 + trial));
        for (Eigen::Index i = 0; i < n; ++i)
            m.diag[i] = 3.0 + std::abs(m.diag[i]) + std::abs(m.lower[i]) + std::abs(m.upper[i]);
        m.lower[0] = 0.0;
        m.upper[n - 1] = 0.0;
        const Eigen::VectorXd rhs = random_vector(n, static_cast<std::uint32_t>(400 + trial));
        const Eigen::VectorXd x = solve_tridiagonal(m, rhs);
        const Eigen::VectorXd x_dense = dense_of(m).partialPivLu().solve(rhs);
        CHECK((x - x_dense).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((apply_tridiagonal(m, x) - rhs).cwiseAbs().maxCoeff() <
              1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("periodic thomas solve matches dense elimination") {
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index n = 8 + 9 * trial;
        TridiagonalMatrix m;
        m.periodic = true;
        m.lower = random_vector(n, static_cast<std::uint32_t>(500 + trial));
        m.upper = random_vector(n, static_cast<std::uint32_t>(600 + trial));
        m.diag = random_vector(n, static_cast<std::uint32_t>(700 + trial));
        m.corner_lower = 0.3 + 0.1 * trial;
        m.corner_upper = -0.2 - 0.05 * trial;
        for (Eigen::Index i = 0; i < n; ++i)
            m.diag[i] = 4.0 + std::abs(m.diag[i]) + std::abs(m.lower[i]) + std::abs(m.upper[i]);
        const Eigen::VectorXd rhs = random_vector(n, static_cast<std::uint32_t>(800 + trial));
        const Eigen::VectorXd x = solve_tridiagonal(m, rhs);
        const Eigen::VectorXd x_dense = dense_of(m).partialPivLu().solve(rhs);
        CHECK((x - x_dense).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("singular pivot raises a clean error") {
    TridiagonalMatrix m;
    m.lower = Eigen::VectorXd::Zero(2);
    m.diag = Eigen::VectorXd::Zero(2);
    m.upper = Eigen::VectorXd::Zero(2);
    Eigen::Vector2d rhs(1.0, 1.0);
    CHECK_THROWS_AS(solve_tridiagonal(m, rhs), SingularSystemError);
}

TEST_CASE("assembled operator: explicit scheme is the identity") {
    const Grid g = build_uniform(0.0, 1.0, 8);
    ModelParams p;
    p.x0 = 0.5;
    p.x_lo = 0.0;
    p.x_hi = 1.0;
    SchemeParams sc{0.0, 0.0, ItoVariant::CompactD2, Boundary::DirichletZero};
    const TridiagonalMatrix m = assemble_lhs(g, sc, p, 0.01);
    CHECK((m.diag.array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(m.lower.cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.upper.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembled operator: implicit heat stencil at lambda = 1") {
    const Grid g = build_uniform(0.0, 8.0, 8); // h = 1
    ModelParams p;
    p.mu = 0.0;
    p.x0 = 4.0;
    p.x_lo = 0.0;
    p.x_hi = 8.0;
    SchemeParams sc{1.0, 0.0, ItoVariant::CompactD2, Boundary::DirichletZero};
    const TridiagonalMatrix m = assemble_lhs(g, sc, p, 1.0); // k/h^2 = 1
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        CHECK(m.diag[i] == doctest::Approx(2.0).epsilon(1e-14));
        if (i > 0) CHECK(m.lower[i] == doctest::Approx(-0.5).epsilon(1e-14));
        if (i + 1 < m.size()) CHECK(m.upper[i] == doctest::Approx(-0.5).epsilon(1e-14));
    }
}

TEST_CASE("assembled operator: anti-implicit milstein weights") {
    const Grid g = build_uniform(0.0, 8.0, 8); // h = 1
    ModelParams p;
    p.mu = 0.0;
    p.rho = 0.2;
    p.x0 = 4.0;
    p.x_lo = 0.0;
    p.x_hi = 8.0;
    SchemeParams sc{0.5, -1.0, ItoVariant::CompactD2, Boundary::DirichletZero};
    const TridiagonalMatrix m = assemble_lhs(g, sc, p, 1.0);
    CHECK(m.diag[2] == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(m.lower[2] == doctest::Approx(-0.35).epsilon(1e-14));
    CHECK(m.upper[2] == doctest::Approx(-0.35).epsilon(1e-14));
}

TEST_CASE("assembled operator acts on fourier modes with the closed-form eigenvalue") {
    const int J = 32;
    const Grid g = build_uniform(0.0, static_cast<double>(J), J); // h = 1
    ModelParams p;
    p.mu = 0.0;
    p.rho = 0.2;
    p.x0 = 16.0;
    p.x_lo = 0.0;
    p.x_hi = static_cast<double>(J);
    const double k = 0.7;
    for (double theta : {0.0, 0.5, 1.0}) {
        for (double sigma : {-1.0, 0.0, 1.0}) {
            SchemeParams sc{theta, sigma, ItoVariant::CompactD2, Boundary::Periodic};
            const TridiagonalMatrix m = assemble_lhs(g, sc, p, k);
            for (int mode : {1, 5, J / 2}) {
                const double phi = 2.0 * std::numbers::pi * mode / J;
                const double sh = std::sin(0.5 * phi);
                const double a = -2.0 * sh * sh; // h = 1
                const double lam = 1.0 - k * a * (theta - p.rho * sigma);
                Eigen::VectorXd cosv(J);
                for (int j = 0; j < J; ++j) cosv[j] = std::cos(j * phi);
                const Eigen::VectorXd out = apply_tridiagonal(m, cosv);
                CHECK((out - lam * cosv).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("periodic assembled operator preserves vector sums") {
    const Grid g = build_uniform(0.0, 4.0, 24);
    ModelParams p;
    p.mu = 0.081;
    p.rho = 0.2;
    p.x0 = 2.0;
    p.x_lo = 0.0;
    p.x_hi = 4.0;
    SchemeParams sc{0.6, 0.4, ItoVariant::CompactD2, Boundary::Periodic};
    const TridiagonalMatrix m = assemble_lhs(g, sc, p, 0.003);
    const Eigen::VectorXd v = random_vector(24, 42);
    CHECK(apply_tridiagonal(m, v).sum() == doctest::Approx(v.sum()).epsilon(1e-13));
    // consequently the implicit solve preserves the total mass
    const Eigen::VectorXd x = solve_tridiagonal(m, v);
    CHECK(x.sum() == doctest::Approx(v.sum()).epsilon(1e-12));
}
