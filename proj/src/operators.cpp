#include "spdefd/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "spdefd/errors.hpp"
#include "spdefd/scheme.hpp"

namespace spdefd {

namespace {
constexpr double kPivotGuard = 1e-14;
}

Eigen::VectorXd apply_tridiagonal(const TridiagonalMatrix& m, const Eigen::VectorXd& v) {
    const Eigen::Index n = m.size();
    if (v.size() != n) throw std::invalid_argument("apply_tridiagonal: size mismatch");
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = m.diag[i] * v[i];
        if (i > 0) acc += m.lower[i] * v[i - 1];
        if (i + 1 < n) acc += m.upper[i] * v[i + 1];
        out[i] = acc;
    }
    if (m.periodic && n >= 3) {
        out[0] += m.corner_lower * v[n - 1];
        out[n - 1] += m.corner_upper * v[0];
    }
    return out;
}

TridiagonalSolver::TridiagonalSolver(const TridiagonalMatrix& m) {
    const Eigen::Index n = m.size();
    if (n < 1) throw std::invalid_argument("TridiagonalSolver: empty system");
    if (m.lower.size() != n || m.upper.size() != n)
        throw std::invalid_argument("TridiagonalSolver: band size mismatch");
    periodic_ = m.periodic;
    up_ = m.upper;
    low_.resize(n);
    pivot_.resize(n);

    Eigen::VectorXd diag = m.diag;
    if (periodic_) {
        if (n < 3) throw std::invalid_argument("TridiagonalSolver: periodic needs n >= 3");
        corner_lower_ = m.corner_lower;
        corner_upper_ = m.corner_upper;
        // Sherman-Morrison: fold the corners into a rank-one update A = B + u v^T
        // with u = (gamma, 0, .., corner_upper), v = (1, 0, .., corner_lower/gamma).
        gamma_ = -m.diag[0];
        if (std::abs(gamma_) < kPivotGuard) gamma_ = 1.0;
        diag[0] -= gamma_;
        diag[n - 1] -= corner_lower_ * corner_upper_ / gamma_;
    }

    pivot_[0] = diag[0];
    if (std::abs(pivot_[0]) < kPivotGuard)
        throw SingularSystemError("tridiagonal solve: zero pivot at row 0");
    for (Eigen::Index i = 1; i < n; ++i) {
        low_[i] = m.lower[i] / pivot_[i - 1];
        pivot_[i] = diag[i] - low_[i] * up_[i - 1];
        if (std::abs(pivot_[i]) < kPivotGuard)
            throw SingularSystemError("tridiagonal solve: zero pivot at row " +
                                      std::to_string(i));
    }

    if (periodic_) {
        const Eigen::Index nn = n;
        Eigen::VectorXd u = Eigen::VectorXd::Zero(nn);
        u[0] = gamma_;
        u[nn - 1] = corner_upper_;
        q_ = solve_core(u);
        const double denom = 1.0 + q_[0] + corner_lower_ * q_[nn - 1] / gamma_;
        if (std::abs(denom) < kPivotGuard)
            throw SingularSystemError("tridiagonal solve: singular periodic closure");
        denom_ = denom;
    }
}

Eigen::VectorXd TridiagonalSolver::solve_core(const Eigen::VectorXd& rhs) const {
    const Eigen::Index n = pivot_.size();
    Eigen::VectorXd x(n);
    x[0] = rhs[0];
    for (Eigen::Index i = 1; i < n; ++i) x[i] = rhs[i] - low_[i] * x[i - 1];
    x[n - 1] /= pivot_[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i)
        x[i] = (x[i] - up_[i] * x[i + 1]) / pivot_[i];
    return x;
}

Eigen::VectorXd TridiagonalSolver::solve(const Eigen::VectorXd& rhs) const {
    const Eigen::Index n = pivot_.size();
    if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: rhs size mismatch");
    Eigen::VectorXd x = solve_core(rhs);
    if (periodic_) {
        const double factor = (x[0] + corner_lower_ * x[n - 1] / gamma_) / denom_;
        x -= factor * q_;
    }
    return x;
}

Eigen::VectorXd solve_tridiagonal(const TridiagonalMatrix& m, const Eigen::VectorXd& rhs) {
    return TridiagonalSolver(m).solve(rhs);
}

TridiagonalMatrix assemble_lhs(const Grid& grid, const SchemeParams& scheme,
                               const ModelParams& params, double k) {
    if (!(k > 0.0)) throw std::domain_error("assemble_lhs: need k > 0");
    scheme.validate();
    if (scheme.bc == Boundary::Periodic && !grid.uniform())
        throw std::domain_error("assemble_lhs: periodic runs require a uniform grid");

    const double h = grid.h;
    const double theta = scheme.theta;
    const double w = theta - scheme.sigma * params.rho; // weight of the implicit D2 block

    TridiagonalMatrix m;
    const bool periodic = scheme.bc == Boundary::Periodic;
    const Eigen::Index n = periodic ? grid.J : grid.J - 1;
    m.periodic = periodic;
    m.lower.resize(n);
    m.diag.resize(n);
    m.upper.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const int j = periodic ? static_cast<int>(i) : static_cast<int>(i) + 1;
        const double b = periodic ? -params.mu : grid.drift_at(j, params.mu);
        const double s = periodic ? 1.0 : grid.noise_at(j);
        const double ssp = periodic ? 0.0 : s * grid.noise_slope_at(j);
        const double adv = theta * k * b / (2.0 * h);
        const double dif = w * k * s * s / (2.0 * h * h);
        // first-derivative half of the Ito-term operator s s' d_y + s^2 d_yy
        const double madv = scheme.sigma * params.rho * k * ssp / (4.0 * h);
        m.lower[i] = adv - dif - madv;
        m.diag[i] = 1.0 + 2.0 * dif;
        m.upper[i] = -adv - dif + madv;
    }
    if (periodic) {
        // row 0 couples to node J-1, row J-1 couples to node 0
        m.corner_lower = m.lower[0];
        m.corner_upper = m.upper[n - 1];
    } else {
        m.lower[0] = 0.0;
        m.upper[n - 1] = 0.0;
    }
    return m;
}

} // namespace spdefd
