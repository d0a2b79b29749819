#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

namespace spdefd {

struct Grid;

/// Nodal values of the density on a grid (one entry per node; for periodic
/// runs the duplicate wrap node is dropped, see scheme.hpp).
using Field = Eigen::VectorXd;

/// Parameters of the linear parabolic SPDE
///   dv = -mu v_x dt + (1/2) v_xx dt - sqrt(rho) v_x dM.
struct ModelParams {
    double mu = 0.081;   ///< drift per unit time
    double rho = 0.2;    ///< correlation, in [0, 1)
    double x0 = 5.0;     ///< location of the Dirac initial mass
    double x_lo = -16.0 / 3.0;
    double x_hi = 16.0;
    double T = 5.0;      ///< horizon

    void validate() const {
        if (!(rho >= 0.0 && rho < 1.0))
            throw std::domain_error("ModelParams: rho must lie in [0, 1)");
        if (!(x_lo < x0 && x0 < x_hi))
            throw std::domain_error("ModelParams: need x_lo < x0 < x_hi");
        if (!(T > 0.0)) throw std::domain_error("ModelParams: need T > 0");
    }
};

/// Closed-form solution at time t for Dirac initial data, given the Brownian
/// value m_t: a Gaussian of variance (1-rho) t centred at x0 + mu t + sqrt(rho) m_t.
inline double exact_solution(const ModelParams& p, double t, double m_t, double x) {
    if (!(t > 0.0)) throw std::domain_error("exact_solution: need t > 0");
    if (!(p.rho >= 0.0 && p.rho < 1.0))
        throw std::domain_error("exact_solution: rho must lie in [0, 1)");
    const double var = (1.0 - p.rho) * t;
    const double dev = x - p.x0 - p.mu * t - std::sqrt(p.rho) * m_t;
    return std::exp(-dev * dev / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

/// Project Dirac data at x0 onto the hat-function basis of `grid`.
///
/// On a uniform grid the weight at node j is hat_j(x0)/h (at most two nodes
/// are hit); on a stretched grid the projection is done in the computational
/// coordinate against hats in y, scaled so that the discrete mass
/// sum_j v_j g'(y_j) h equals one exactly.
Field dirac_hat_projection(const Grid& grid, double x0);

} // namespace spdefd
