#include "spdefd/credit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spdefd {

double loss(const Field& field, const Grid& grid, LossDiagnostics* diag) {
    if (field.size() != grid.J + 1)
        throw std::invalid_argument("loss: field size mismatch");
    double mass = 0.0;
    if (grid.uniform()) {
        mass = grid.h * field.segment(1, grid.J - 1).sum();
    } else {
        for (int j = 1; j < grid.J; ++j) mass += field[j] * grid.jacobian[j];
        mass *= grid.h;
    }
    double L = 1.0 - mass;
    if (L < 0.0 || L > 1.0) {
        if (diag) ++diag->clamped;
        L = std::min(1.0, std::max(0.0, L));
    }
    return L;
}

double tranche_notional(double L, const TrancheSpec& tranche) {
    return std::max(tranche.d - L, 0.0) - std::max(tranche.a - L, 0.0);
}

double spread_leg(std::span<const double> z_values, const TrancheSpec& tranche) {
    tranche.validate();
    if (z_values.size() != static_cast<std::size_t>(tranche.n) + 1)
        throw std::domain_error("spread_leg: need n+1 notional values");
    double value = 0.0;
    for (int i = 1; i <= tranche.n; ++i) {
        const double discount = std::exp(-tranche.r * tranche.q * i);
        value += discount * (z_values[i - 1] - z_values[i]);
    }
    return value;
}

Grid price_grid(const PriceConfig& cfg, int level) {
    const int J = cfg.J0 << level;
    if (cfg.alpha == 1.0) return build_uniform(0.0, cfg.params.x_hi, J);
    return build_stretched(cfg.params.x_hi, J, cfg.alpha, cfg.params);
}

PricePathResult price_path(const Grid& grid, const PriceConfig& cfg, int level,
                           const BrownianPath& path) {
    cfg.tranche.validate();
    if (std::abs(cfg.tranche.maturity() - cfg.params.T) > 1e-12 * cfg.params.T)
        throw std::domain_error("price_path: tranche maturity must equal the horizon");
    const double stride_real = cfg.tranche.q / path.k;
    const long stride = std::lround(stride_real);
    if (stride < 1 || std::abs(stride_real - static_cast<double>(stride)) > 1e-9)
        throw std::domain_error("price_path: timestep must divide the payment interval");
    if (stride * cfg.tranche.n != path.steps())
        throw std::domain_error("price_path: path length does not span the payment grid");

    PricePathResult res;
    LossDiagnostics diag;
    std::vector<double> z(static_cast<std::size_t>(cfg.tranche.n) + 1);
    const Field v0 = dirac_hat_projection(grid, cfg.params.x0);
    double last_loss = loss(v0, grid, &diag);
    z[0] = tranche_notional(last_loss, cfg.tranche);

    int payment = 1;
    run(grid, v0, path, cfg.scheme, cfg.params, [&](long step, const Field& v) {
        if (step % stride != 0) return;
        const double L = loss(v, grid, &diag);
        if (L < last_loss - 1e-8) ++res.monotone_violations;
        res.worst_loss_decrease = std::max(res.worst_loss_decrease, last_loss - L);
        last_loss = L;
        z[static_cast<std::size_t>(payment)] = tranche_notional(L, cfg.tranche);
        ++payment;
    });
    res.value = spread_leg(z, cfg.tranche);
    res.clamped = diag.clamped;
    return res;
}

LevelEstimate price_level(const PriceConfig& cfg, int level, long n_samples) {
    // grids are immutable; build once per level and share across worker threads
    std::vector<Grid> grids;
    for (int l = 0; l <= level; ++l) grids.push_back(price_grid(cfg, l));

    const MlmcConfig mlmc{cfg.params.T, cfg.k0, cfg.seed, cfg.threads};
    const LevelPayoff payoff = [&](int l, const BrownianPath& path) {
        return price_path(grids[static_cast<std::size_t>(l)], cfg, l, path).value;
    };
    return mlmc_level_estimate(mlmc, level, n_samples, payoff);
}

} // namespace spdefd
