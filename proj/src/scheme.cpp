#include "spdefd/scheme.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "spdefd/errors.hpp"

namespace spdefd {

Stepper::Stepper(const Grid& grid, const SchemeParams& scheme, const ModelParams& params,
                 double k)
    : grid_(&grid),
      scheme_(scheme),
      k_(k),
      rho_(params.rho),
      solver_(assemble_lhs(grid, scheme, params, k)) {
    params.validate();
    const bool periodic = scheme.bc == Boundary::Periodic;
    n_sys_ = periodic ? grid.J : grid.J - 1;
    n_field_ = periodic ? grid.J : grid.J + 1;

    const double h = grid.h;
    const double one_m_theta = 1.0 - scheme.theta;
    c_drift_.resize(n_sys_);
    c_noise_.resize(n_sys_);
    c_diff_.resize(n_sys_);
    c_ito_.resize(n_sys_);
    c_ito_slope_.resize(n_sys_);
    for (Eigen::Index i = 0; i < n_sys_; ++i) {
        const int j = periodic ? static_cast<int>(i) : static_cast<int>(i) + 1;
        const double b = periodic ? -params.mu : grid.drift_at(j, params.mu);
        const double s = periodic ? 1.0 : grid.noise_at(j);
        const double s2 = s * s;
        // on stretched grids the double Ito integral carries the operator
        // s s' d_y + s^2 d_yy; the first-derivative half appears here and in
        // the sigma-weighted implicit block
        const double ssp = periodic ? 0.0 : s * grid.noise_slope_at(j);
        c_drift_[i] = one_m_theta * k * b / (2.0 * h) +
                      scheme.sigma * rho_ * k * ssp / (4.0 * h);
        c_noise_[i] = std::sqrt(rho_ * k) * s / (2.0 * h);
        c_diff_[i] = (one_m_theta + scheme.sigma * rho_) * k * s2 / (2.0 * h * h);
        c_ito_[i] = rho_ * k * s2 / (2.0 * h * h);
        c_ito_slope_[i] = rho_ * k * ssp / (4.0 * h);
    }
    rhs_.resize(n_sys_);
}

Field Stepper::apply(const Field& v, double z) {
    if (v.size() != n_field_)
        throw std::invalid_argument("Stepper::apply: field size mismatch");
    if (!std::isfinite(z)) throw std::invalid_argument("Stepper::apply: non-finite draw");

    const bool periodic = scheme_.bc == Boundary::Periodic;
    const bool iterated = scheme_.variant == ItoVariant::IteratedD1;
    const double zz = z * z - 1.0;
    const Eigen::Index n = n_sys_;

    // rhs = v + [(1-theta) k b/2h - sqrt(rho k) s z/2h] D1 v
    //         + [((1-theta) + sigma rho) k s^2/2h^2] D2 v
    //         + rho k s^2/2h^2 (z^2 - 1) * Ito stencil v
    // The sigma-weighted deterministic Milstein block stays on the compact D2
    // stencil for both variants so the implicit system remains tridiagonal;
    // the (z^2-1) fluctuation carries the variant's stencil.
    if (periodic) {
        const Eigen::Index nf = v.size();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double vm = v[(i - 1 + nf) % nf];
            const double vp = v[(i + 1) % nf];
            const double d1 = vp - vm;
            const double d2 = vp - 2.0 * v[i] + vm;
            double ito;
            if (iterated) {
                const double vmm = v[(i - 2 + nf) % nf];
                const double vpp = v[(i + 2) % nf];
                ito = 0.25 * (vpp - 2.0 * v[i] + vmm);
            } else {
                ito = d2;
            }
            rhs_[i] = v[i] + (c_drift_[i] - z * c_noise_[i]) * d1 + c_diff_[i] * d2 +
                      zz * (c_ito_[i] * ito + c_ito_slope_[i] * d1);
        }
    } else {
        const Eigen::Index J = grid_->J;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index j = i + 1;
            const double d1 = v[j + 1] - v[j - 1];
            const double d2 = v[j + 1] - 2.0 * v[j] + v[j - 1];
            double ito;
            if (iterated) {
                const double vmm = (j >= 2) ? v[j - 2] : 0.0;
                const double vpp = (j + 2 <= J) ? v[j + 2] : 0.0;
                ito = 0.25 * (vpp - 2.0 * v[j] + vmm);
            } else {
                ito = d2;
            }
            rhs_[i] = v[j] + (c_drift_[i] - z * c_noise_[i]) * d1 + c_diff_[i] * d2 +
                      zz * (c_ito_[i] * ito + c_ito_slope_[i] * d1);
        }
    }

    const Eigen::VectorXd sol = solver_.solve(rhs_);
    Field out;
    if (periodic) {
        out = sol;
    } else {
        out = Field::Zero(grid_->J + 1);
        out.segment(1, n) = sol;
    }
    if (!out.allFinite())
        throw OverflowError("theta-sigma step produced non-finite values");
    return out;
}

Field step(const Grid& grid, const Field& v, double z, double k,
           const SchemeParams& scheme, const ModelParams& params,
           const TridiagonalMatrix& lhs) {
    const bool periodic = scheme.bc == Boundary::Periodic;
    const Eigen::Index expect = periodic ? grid.J : grid.J - 1;
    if (lhs.size() != expect)
        throw std::invalid_argument("step: lhs not assembled for this grid/boundary");
    Stepper st(grid, scheme, params, k);
    return st.apply(v, z);
}

Field step(const Grid& grid, const Field& v, double z, double k,
           const SchemeParams& scheme, const ModelParams& params) {
    Stepper st(grid, scheme, params, k);
    return st.apply(v, z);
}

Field run(const Grid& grid, const Field& v0, const BrownianPath& path,
          const SchemeParams& scheme, const ModelParams& params,
          const StepObserver& observer) {
    Stepper st(grid, scheme, params, path.k);
    if (v0.size() != st.field_size())
        throw std::invalid_argument("run: initial field size mismatch");
    Field v = v0;
    const long n = path.steps();
    for (long i = 0; i < n; ++i) {
        try {
            v = st.apply(v, path.draws[i]);
        } catch (const OverflowError& e) {
            throw OverflowError(std::string(e.what()) + " at step " + std::to_string(i), i);
        } catch (const SingularSystemError& e) {
            throw SingularSystemError(std::string(e.what()) + " at step " + std::to_string(i));
        }
        if (observer) observer(i + 1, v);
    }
    return v;
}

double field_mass(const Grid& grid, const Field& v, Boundary bc) {
    if (bc == Boundary::Periodic) return grid.h * v.sum();
    return grid.h * v.segment(1, grid.J - 1).sum();
}

} // namespace spdefd
