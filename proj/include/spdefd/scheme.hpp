#pragma once

#include <functional>
#include <stdexcept>

#include <Eigen/Core>

#include "spdefd/grid.hpp"
#include "spdefd/model.hpp"
#include "spdefd/operators.hpp"
#include "spdefd/path.hpp"

namespace spdefd {

/// Stencil used for the double Ito-integral correction.
enum class ItoVariant {
    CompactD2,  ///< second central difference (compact stencil)
    IteratedD1, ///< iterated first difference over 2h, scaled by 1/4
};

/// Weights of the theta-sigma Milstein family.
///
/// theta weights the drift/diffusion between time levels; sigma does the same
/// for the deterministic part of the double Ito integral. theta = sigma = 0
/// is the fully explicit Milstein scheme; sigma < 0 is the "anti-implicit"
/// treatment that buys unconditional mean-square stability at theta >= 1/2.
struct SchemeParams {
    double theta = 0.5;
    double sigma = -1.0;
    ItoVariant variant = ItoVariant::CompactD2;
    Boundary bc = Boundary::DirichletZero;

    void validate() const {
        if (!(theta >= 0.0 && theta <= 1.0))
            throw std::domain_error("SchemeParams: theta must lie in [0, 1]");
        if (!(sigma >= -1.0 && sigma <= 1.0))
            throw std::domain_error("SchemeParams: sigma must lie in [-1, 1]");
    }
};

inline SchemeParams explicit_scheme() { return {0.0, 0.0, ItoVariant::CompactD2, Boundary::DirichletZero}; }
inline SchemeParams drift_implicit_scheme() { return {1.0, 0.0, ItoVariant::CompactD2, Boundary::DirichletZero}; }
inline SchemeParams crank_nicolson_anti_scheme() { return {0.5, -1.0, ItoVariant::CompactD2, Boundary::DirichletZero}; }

/// One-step engine with the z-independent coefficient arrays and the LHS
/// factorisation precomputed. Holds per-run scratch; use one per execution
/// context.
class Stepper {
public:
    Stepper(const Grid& grid, const SchemeParams& scheme, const ModelParams& params,
            double k);

    /// Advance one step with standard normal draw z. Throws OverflowError on
    /// non-finite results and SingularSystemError from the linear solve.
    Field apply(const Field& v, double z);

    Eigen::Index field_size() const { return n_field_; }

private:
    const Grid* grid_;
    SchemeParams scheme_;
    double k_ = 0.0;
    double rho_ = 0.0;
    Eigen::Index n_sys_ = 0;   // linear system size
    Eigen::Index n_field_ = 0; // expected field length
    TridiagonalSolver solver_;
    Eigen::VectorXd c_drift_; ///< (1-theta) k b_j / 2h
    Eigen::VectorXd c_noise_; ///< sqrt(rho k) s_j / 2h
    Eigen::VectorXd c_diff_;  ///< ((1-theta) + sigma rho) k s_j^2 / 2h^2
    Eigen::VectorXd c_ito_;   ///< rho k s_j^2 / 2h^2
    Eigen::VectorXd c_ito_slope_; ///< rho k s_j s_j' / 4h (stretched grids)
    Eigen::VectorXd rhs_;
};

/// Single theta-sigma Milstein step against a preassembled left-hand side.
Field step(const Grid& grid, const Field& v, double z, double k,
           const SchemeParams& scheme, const ModelParams& params,
           const TridiagonalMatrix& lhs);

/// Convenience overload that assembles the left-hand side itself.
Field step(const Grid& grid, const Field& v, double z, double k,
           const SchemeParams& scheme, const ModelParams& params);

/// Called after each completed step with (step index, current field).
using StepObserver = std::function<void(long, const Field&)>;

/// Run the scheme across a whole Brownian path; returns the terminal field.
/// Step failures are rethrown with the failing step index in the message.
Field run(const Grid& grid, const Field& v0, const BrownianPath& path,
          const SchemeParams& scheme, const ModelParams& params,
          const StepObserver& observer = {});

/// Discrete mass h * sum of the field (interior sum under Dirichlet).
double field_mass(const Grid& grid, const Field& v, Boundary bc);

} // namespace spdefd
