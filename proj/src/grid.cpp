#include "spdefd/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace spdefd {

Grid build_uniform(double x_lo, double x_hi, int J) {
    if (J < 2) throw std::domain_error("build_uniform: need J >= 2");
    if (!(x_lo < x_hi)) throw std::domain_error("build_uniform: need x_lo < x_hi");
    Grid g;
    g.J = J;
    g.h = (x_hi - x_lo) / J;
    g.alpha = 1.0;
    g.x.resize(J + 1);
    for (int j = 0; j <= J; ++j) g.x[j] = x_lo + j * g.h;
    g.x[J] = x_hi;
    g.y = g.x;
    g.jacobian = Eigen::VectorXd::Ones(J + 1);
    return g;
}

Grid build_stretched(double x_hi, int J, double alpha, const ModelParams& params) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("build_stretched: need alpha in (0, 1]");
    if (!(x_hi > 0.0)) throw std::domain_error("build_stretched: need x_hi > 0");
    if (alpha == 1.0) return build_uniform(0.0, x_hi, J);
    if (J < 2) throw std::domain_error("build_stretched: need J >= 2");

    Grid g;
    g.J = J;
    g.alpha = alpha;
    const double y_hi = std::pow(x_hi, alpha);
    g.h = y_hi / J;
    g.y.resize(J + 1);
    g.x.resize(J + 1);
    g.jacobian.resize(J + 1);
    const double inv_alpha = 1.0 / alpha;
    for (int j = 0; j <= J; ++j) {
        const double yj = j * g.h;
        g.y[j] = yj;
        g.x[j] = std::pow(yj, inv_alpha);
        // g'(y) = (1/alpha) y^(1/alpha - 1); zero at the origin for alpha < 1
        g.jacobian[j] = inv_alpha * std::pow(yj, inv_alpha - 1.0);
    }
    g.y[J] = y_hi;
    g.x[J] = x_hi;

    g.noise_scale.resize(J - 1);
    g.noise_slope.resize(J - 1);
    g.drift_coef.resize(J - 1);
    for (int j = 1; j < J; ++j) {
        const double yj = g.y[j];
        const double xj = g.x[j];
        const double s = alpha * std::pow(yj, 1.0 - inv_alpha);      // f' o g
        const double fpp = alpha * (alpha - 1.0) * std::pow(xj, alpha - 2.0);
        g.noise_scale[j - 1] = s;
        // d/dy of f' o g; note f'' o g = s s' by the chain rule
        g.noise_slope[j - 1] = (alpha - 1.0) * std::pow(yj, -inv_alpha);
        g.drift_coef[j - 1] = -params.mu * s + 0.5 * fpp;
    }
    return g;
}

} // namespace spdefd
