#include "spdefd/model.hpp"

#include <cmath>
#include <stdexcept>

#include "spdefd/grid.hpp"

namespace spdefd {

Field dirac_hat_projection(const Grid& grid, double x0) {
    if (!(x0 >= grid.x_lo() && x0 <= grid.x_hi()))
        throw std::domain_error("dirac_hat_projection: x0 outside grid");
    const double y0 = grid.uniform() ? x0 : std::pow(x0, grid.alpha);
    const double h = grid.h;
    int cell = static_cast<int>(std::floor((y0 - grid.y[0]) / h));
    if (cell < 0) cell = 0;
    if (cell > grid.J - 1) cell = grid.J - 1;

    Field v = Field::Zero(grid.J + 1);
    // hat weights in the computational coordinate; dividing by the Jacobian
    // at the node keeps the discrete mass sum_j v_j g'(y_j) h at exactly one
    const double w_right = (y0 - grid.y[cell]) / h;
    const double w_left = 1.0 - w_right;
    const auto deposit = [&](int j, double w) {
        if (w == 0.0) return;
        const double jac = grid.jacobian[j];
        if (!(jac > 0.0))
            throw std::domain_error(
                "dirac_hat_projection: x0 too close to the stretched-grid origin");
        v[j] = w / (h * jac);
    };
    deposit(cell, w_left);
    deposit(cell + 1, w_right);
    return v;
}

} // namespace spdefd
