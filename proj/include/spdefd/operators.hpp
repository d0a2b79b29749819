#pragma once

#include <Eigen/Core>

#include "spdefd/grid.hpp"
#include "spdefd/model.hpp"

namespace spdefd {

enum class Boundary {
    DirichletZero, ///< homogeneous Dirichlet; ghost values are zero
    Periodic,      ///< indices wrap; vectors hold one entry per distinct node
};

/// First central difference, undivided: (D1 v)_j = v_{j+1} - v_{j-1}.
template <class Derived>
Eigen::VectorXd apply_d1(const Eigen::MatrixBase<Derived>& v, Boundary bc) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd out(n);
    if (bc == Boundary::Periodic) {
        for (Eigen::Index j = 0; j < n; ++j)
            out[j] = v[(j + 1) % n] - v[(j - 1 + n) % n];
    } else {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double right = (j + 1 < n) ? v[j + 1] : 0.0;
            const double left = (j - 1 >= 0) ? v[j - 1] : 0.0;
            out[j] = right - left;
        }
    }
    return out;
}

/// Second central difference, undivided: (D2 v)_j = v_{j+1} - 2 v_j + v_{j-1}.
template <class Derived>
Eigen::VectorXd apply_d2(const Eigen::MatrixBase<Derived>& v, Boundary bc) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd out(n);
    if (bc == Boundary::Periodic) {
        for (Eigen::Index j = 0; j < n; ++j)
            out[j] = v[(j + 1) % n] - 2.0 * v[j] + v[(j - 1 + n) % n];
    } else {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double right = (j + 1 < n) ? v[j + 1] : 0.0;
            const double left = (j - 1 >= 0) ? v[j - 1] : 0.0;
            out[j] = right - 2.0 * v[j] + left;
        }
    }
    return out;
}

/// Iterated first difference (D1 applied twice): v_{j+2} - 2 v_j + v_{j-2}.
template <class Derived>
Eigen::VectorXd apply_d1_twice(const Eigen::MatrixBase<Derived>& v, Boundary bc) {
    const Eigen::Index n = v.size();
    Eigen::VectorXd out(n);
    if (bc == Boundary::Periodic) {
        for (Eigen::Index j = 0; j < n; ++j)
            out[j] = v[(j + 2) % n] - 2.0 * v[j] + v[(j - 2 + n) % n];
    } else {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double right = (j + 2 < n) ? v[j + 2] : 0.0;
            const double left = (j - 2 >= 0) ? v[j - 2] : 0.0;
            out[j] = right - 2.0 * v[j] + left;
        }
    }
    return out;
}

/// Tridiagonal system; periodic systems carry the two wrap-around corners.
/// Dirichlet systems act on interior nodes only (size J-1), periodic on the
/// J distinct nodes.
struct TridiagonalMatrix {
    Eigen::VectorXd lower; ///< lower[i] couples row i to i-1 (lower[0] unused unless periodic)
    Eigen::VectorXd diag;
    Eigen::VectorXd upper; ///< upper[i] couples row i to i+1 (last unused unless periodic)
    bool periodic = false;
    double corner_lower = 0.0; ///< entry (0, n-1) for periodic systems
    double corner_upper = 0.0; ///< entry (n-1, 0) for periodic systems

    Eigen::Index size() const { return diag.size(); }
};

/// Dense multiply, mostly for residual checks in tests.
Eigen::VectorXd apply_tridiagonal(const TridiagonalMatrix& m, const Eigen::VectorXd& v);

/// Thomas elimination with a small-pivot guard, factored once so repeated
/// solves against the same matrix only run the substitution sweeps.
/// Periodic systems use the Sherman-Morrison rank-one update.
class TridiagonalSolver {
public:
    explicit TridiagonalSolver(const TridiagonalMatrix& m);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    bool periodic_ = false;
    Eigen::VectorXd low_;   ///< elimination multipliers
    Eigen::VectorXd pivot_; ///< eliminated diagonal
    Eigen::VectorXd up_;
    Eigen::VectorXd q_;     ///< periodic correction column
    double corner_lower_ = 0.0;
    double corner_upper_ = 0.0;
    double gamma_ = 0.0;
    double denom_ = 1.0;

    Eigen::VectorXd solve_core(const Eigen::VectorXd& rhs) const;
};

/// One-shot Thomas solve.
Eigen::VectorXd solve_tridiagonal(const TridiagonalMatrix& m, const Eigen::VectorXd& rhs);

struct SchemeParams;

/// Left-hand-side operator of the theta-sigma step for timestep k:
///   I - theta k (b_j/2h) D1 - theta k (s_j^2/2h^2) D2 + sigma rho k (s_j^2/2h^2) D2.
TridiagonalMatrix assemble_lhs(const Grid& grid, const SchemeParams& scheme,
                               const ModelParams& params, double k);

} // namespace spdefd
