#pragma once

#include <Eigen/Core>

#include "spdefd/model.hpp"

namespace spdefd {

/// Spatial grid, uniform in the computational coordinate y.
///
/// For uniform grids y coincides with x. Power-stretched grids use
/// y = f(x) = x^alpha with inverse g(y) = y^(1/alpha): the solver works on a
/// uniform y-grid, which is equivalent to a non-uniform physical mesh
/// x_j = g(j h) clustered at the origin.
///
/// The transformed equation carries variable coefficients; for interior node
/// j these are stored as
///   noise_scale  s_j = f'(g(y_j))                     (scales v_y terms)
///   drift_coef   b_j = -mu s_j + (1/2) f''(g(y_j))    (net v_y drift)
/// Uniform grids leave the arrays empty (s = 1, b = -mu with mu supplied at
/// scheme assembly time). The boundary node y = 0 never needs the
/// coefficients, which are singular there for alpha < 1.
struct Grid {
    int J = 0;           ///< number of mesh intervals
    double h = 0.0;      ///< computational spacing
    double alpha = 1.0;  ///< stretching exponent (1 = uniform)
    Eigen::VectorXd x;   ///< J+1 physical node coordinates
    Eigen::VectorXd y;   ///< J+1 computational node coordinates
    Eigen::VectorXd drift_coef;   ///< b_j at interior nodes (size J-1, empty if uniform)
    Eigen::VectorXd noise_scale;  ///< s_j at interior nodes (size J-1, empty if uniform)
    Eigen::VectorXd noise_slope;  ///< s'(y_j) at interior nodes (empty if uniform)
    Eigen::VectorXd jacobian;     ///< g'(y_j) at all nodes (ones if uniform)

    bool uniform() const { return drift_coef.size() == 0; }
    double x_lo() const { return x[0]; }
    double x_hi() const { return x[J]; }

    /// Drift coefficient at interior node j (1 <= j <= J-1).
    double drift_at(int j, double mu) const {
        return uniform() ? -mu : drift_coef[j - 1];
    }
    /// Noise scale at interior node j (1 <= j <= J-1).
    double noise_at(int j) const {
        return uniform() ? 1.0 : noise_scale[j - 1];
    }
    /// d/dy of the noise scale at interior node j; zero on uniform grids.
    double noise_slope_at(int j) const {
        return uniform() ? 0.0 : noise_slope[j - 1];
    }
};

/// Uniform grid with J intervals on [x_lo, x_hi].
Grid build_uniform(double x_lo, double x_hi, int J);

/// Power-stretched grid on [0, x_hi] with y = x^alpha uniform in y.
/// alpha = 1 returns exactly build_uniform(0, x_hi, J).
Grid build_stretched(double x_hi, int J, double alpha, const ModelParams& params);

} // namespace spdefd
