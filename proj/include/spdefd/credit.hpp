#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "spdefd/grid.hpp"
#include "spdefd/harness.hpp"
#include "spdefd/model.hpp"
#include "spdefd/path.hpp"
#include "spdefd/scheme.hpp"

namespace spdefd {

/// Tranche of a basket credit derivative with regular spread payments.
struct TrancheSpec {
    double a = 0.0;   ///< attachment
    double d = 0.03;  ///< detachment
    double r = 0.042; ///< interest rate per year
    double q = 0.25;  ///< payment interval in years
    int n = 20;       ///< number of payments

    double maturity() const { return n * q; }

    void validate() const {
        if (!(a >= 0.0 && a < d && d <= 1.0))
            throw std::domain_error("TrancheSpec: need 0 <= a < d <= 1");
        if (!(r >= 0.0)) throw std::domain_error("TrancheSpec: need r >= 0");
        if (!(q > 0.0 && n >= 1)) throw std::domain_error("TrancheSpec: need q > 0, n >= 1");
    }
};

struct LossDiagnostics {
    long clamped = 0; ///< loss evaluations clamped into [0, 1]
};

/// Basket loss from the solved density: one minus the surviving mass.
/// Uniform grids use the interior Riemann sum 1 - h sum v_j; stretched grids
/// weight nodal values with the coordinate Jacobian g'(y_j). Clamped to
/// [0, 1]; clamping events are counted when diagnostics are supplied.
double loss(const Field& field, const Grid& grid, LossDiagnostics* diag = nullptr);

/// Outstanding tranche notional Z = max(d - L, 0) - max(a - L, 0).
double tranche_notional(double L, const TrancheSpec& tranche);

/// Single-path discounted spread payments: sum_i e^(-r i q) (Z_{i-1} - Z_i).
/// Expects n+1 notional values at the payment dates T_0 = 0, .., T_n.
double spread_leg(std::span<const double> z_values, const TrancheSpec& tranche);

/// Setup for pricing the spread leg on the absorbing-boundary problem.
struct PriceConfig {
    ModelParams params;   ///< x_lo must be 0 (absorbing barrier)
    TrancheSpec tranche;
    SchemeParams scheme = crank_nicolson_anti_scheme();
    int J0 = 10;          ///< mesh intervals at level 0
    double k0 = 0.25;     ///< timestep at level 0
    double alpha = 1.0;   ///< grid stretching exponent (1 = uniform)
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Level-l grid for the pricing problem (uniform or power-stretched).
Grid price_grid(const PriceConfig& cfg, int level);

struct PricePathResult {
    double value = 0.0;
    long clamped = 0;              ///< loss clamping events along the path
    long monotone_violations = 0;  ///< payment-date losses decreasing by > 1e-8
    double worst_loss_decrease = 0.0; ///< largest payment-to-payment loss decrease
};

/// Price one path at one level: solve from Dirac data, record the notional at
/// every payment date on the completed step, and evaluate the spread leg.
PricePathResult price_path(const Grid& grid, const PriceConfig& cfg, int level,
                           const BrownianPath& path);

/// MLMC level statistics of the spread-leg payoff; levels l and l-1 are
/// coupled through the shared Brownian trajectory.
LevelEstimate price_level(const PriceConfig& cfg, int level, long n_samples);

} // namespace spdefd
