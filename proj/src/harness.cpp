#include "spdefd/harness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spdefd/parallel.hpp"
#include "spdefd/util.hpp"

namespace spdefd {

namespace {

int level_intervals(double span, double h, int level) {
    const double width = h * std::pow(2.0, -level);
    const long j = std::lround(span / width);
    if (j < 2 || std::abs(span - static_cast<double>(j) * width) > 1e-9 * span)
        throw std::domain_error("convergence grid: h_l does not divide the domain");
    return static_cast<int>(j);
}

ErrorEstimate stats_of(const std::vector<double>& buf) {
    const SampleStats s = sample_stats(buf);
    return {s.mean, s.std_error, s.n};
}

} // namespace

Grid convergence_grid(const ConvergenceConfig& cfg, int level) {
    const double span = cfg.params.x_hi - cfg.params.x_lo;
    const int J = level_intervals(span, cfg.h0, level);
    return build_uniform(cfg.params.x_lo, cfg.params.x_hi, J);
}

namespace {

LevelErrors measure_level_impl(const ConvergenceConfig& cfg, int level, long M,
                               bool with_exact, bool with_two_grid) {
    cfg.params.validate();
    if (M < 1) throw std::domain_error("measure_level: need M >= 1");
    const auto [h, k] = level_sequence(level, cfg.h0, cfg.k0);
    const Grid fine = convergence_grid(cfg, level);
    const Field v0_fine = dirac_hat_projection(fine, cfg.params.x0);

    Grid coarse;
    Field v0_coarse;
    if (with_two_grid) {
        if (fine.J % 2 != 0)
            throw std::domain_error("error_two_grid: fine and coarse grids not nested");
        coarse = build_uniform(cfg.params.x_lo, cfg.params.x_hi, fine.J / 2);
        v0_coarse = dirac_hat_projection(coarse, cfg.params.x0);
    }

    std::vector<double> buf_exact(with_exact ? M : 0);
    std::vector<double> buf_two(with_two_grid ? M : 0);

    parallel_for(static_cast<std::size_t>(M), cfg.threads, [&](std::size_t m) {
        const NormalStream stream{cfg.seed, static_cast<std::uint32_t>(m),
                                  static_cast<std::uint16_t>(level),
                                  StreamPurpose::PathDraws};
        const BrownianPath path = sample_path(cfg.params.T, k, stream);
        const Field vt = run(fine, v0_fine, path, cfg.scheme, cfg.params);

        if (with_exact) {
            const double mt = path.terminal();
            double acc = 0.0;
            for (int j = 0; j <= fine.J; ++j) {
                const double d =
                    vt[j] - exact_solution(cfg.params, cfg.params.T, mt, fine.x[j]);
                acc += d * d;
            }
            buf_exact[m] = acc * fine.h;
        }
        if (with_two_grid) {
            const BrownianPath cpath = coarsen_path(path);
            const Field ct = run(coarse, v0_coarse, cpath, cfg.scheme, cfg.params);
            double acc = 0.0;
            for (int j = 0; j <= coarse.J; ++j) {
                const double d = vt[2 * j] - ct[j];
                acc += d * d;
            }
            buf_two[m] = acc * fine.h;
        }
    });

    LevelErrors out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.exact2 = with_exact ? stats_of(buf_exact) : ErrorEstimate{nan, nan, 0};
    out.two_grid2 = with_two_grid ? stats_of(buf_two) : ErrorEstimate{nan, nan, 0};
    return out;
}

} // namespace

ErrorEstimate error_exact(const ConvergenceConfig& cfg, int level, long M) {
    return measure_level_impl(cfg, level, M, true, false).exact2;
}

ErrorEstimate error_two_grid(const ConvergenceConfig& cfg, int level, long M) {
    return measure_level_impl(cfg, level, M, false, true).two_grid2;
}

LevelErrors measure_level(const ConvergenceConfig& cfg, int level, long M,
                          bool with_exact) {
    return measure_level_impl(cfg, level, M, with_exact, true);
}

LevelEstimate mlmc_level_estimate(const MlmcConfig& cfg, int level, long n_samples,
                                  const LevelPayoff& payoff) {
    if (level < 0) throw std::domain_error("mlmc_level_estimate: need level >= 0");
    if (n_samples < 2) throw std::domain_error("mlmc_level_estimate: need N_l >= 2");
    const double k = cfg.k0 * std::pow(4.0, -level);

    std::vector<double> buf(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), cfg.threads, [&](std::size_t i) {
        const NormalStream stream{cfg.seed, static_cast<std::uint32_t>(i),
                                  static_cast<std::uint16_t>(level),
                                  StreamPurpose::PathDraws};
        const BrownianPath fine = sample_path(cfg.T, k, stream);
        double y = payoff(level, fine);
        if (level > 0) y -= payoff(level - 1, coarsen_path(fine));
        buf[i] = y;
    });

    const SampleStats s = sample_stats(buf);
    return {level, s.n, s.mean, s.variance, s.std_error};
}

ParticleResult particle_oracle(long n_particles, const BrownianPath& path,
                               const ModelParams& params, const Grid& bin_grid,
                               bool absorbing, const NormalStream& stream,
                               unsigned threads, int coarse_stride) {
    if (n_particles < 1) throw std::domain_error("particle_oracle: need particles");
    if (coarse_stride < 1) coarse_stride = 1;
    params.validate();

    const long n_steps = path.steps();
    const double k = path.k;
    const double idio = std::sqrt((1.0 - params.rho) * k);
    Eigen::VectorXd common(n_steps);
    for (long n = 0; n < n_steps; ++n)
        common[n] = params.mu * k + std::sqrt(params.rho * k) * path.draws[n];

    const unsigned workers = resolve_threads(threads);
    const long chunks = std::min<long>(n_particles, workers);
    struct ChunkAcc {
        long absorbed = 0;
        long absorbed_coarse = 0;
        Eigen::VectorXd counts;
    };
    std::vector<ChunkAcc> acc(static_cast<std::size_t>(chunks));

    parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t cix) {
        const long lo = n_particles * static_cast<long>(cix) / chunks;
        const long hi = n_particles * (static_cast<long>(cix) + 1) / chunks;
        ChunkAcc& a = acc[cix];
        a.counts = Eigen::VectorXd::Zero(bin_grid.J);
        // per-particle index stride padded to even so Box-Muller pairs never
        // straddle two particles
        const std::uint64_t stride =
            static_cast<std::uint64_t>(n_steps + (n_steps & 1));
        for (long p = lo; p < hi; ++p) {
            double x = params.x0;
            bool alive = true;        // barrier checked every step
            bool alive_coarse = true; // barrier checked every coarse_stride steps
            const std::uint64_t base = static_cast<std::uint64_t>(p) * stride;
            double pair_second = 0.0;
            for (long n = 0; n < n_steps; ++n) {
                double xi;
                if ((n & 1) == 0) {
                    const auto pr = stream.normal_pair((base + n) >> 1);
                    xi = pr.first;
                    pair_second = pr.second;
                } else {
                    xi = pair_second;
                }
                x += common[n] + idio * xi;
                if (absorbing) {
                    if (alive && x <= 0.0) alive = false;
                    if (alive_coarse && x <= 0.0 &&
                        ((n + 1) % coarse_stride == 0 || n + 1 == n_steps))
                        alive_coarse = false;
                    if (!alive_coarse) break; // both monitors done with this particle
                }
            }
            if (!alive) {
                ++a.absorbed;
            } else {
                // bin the survivor on the physical cells, clamping the rare
                // excursions past the grid ends into the boundary cells
                int cell;
                if (bin_grid.uniform()) {
                    cell = static_cast<int>(std::floor((x - bin_grid.x_lo()) / bin_grid.h));
                } else {
                    cell = static_cast<int>(
                        std::floor(std::pow(std::max(x, 0.0), bin_grid.alpha) / bin_grid.h));
                }
                if (cell < 0) cell = 0;
                if (cell >= bin_grid.J) cell = bin_grid.J - 1;
                a.counts[cell] += 1.0;
            }
            if (!alive_coarse) ++a.absorbed_coarse;
        }
    });

    ParticleResult res;
    res.n_particles = n_particles;
    res.coarse_stride = coarse_stride;
    res.cell_counts = Eigen::VectorXd::Zero(bin_grid.J);
    long absorbed = 0, absorbed_coarse = 0;
    for (const auto& a : acc) {
        absorbed += a.absorbed;
        absorbed_coarse += a.absorbed_coarse;
        res.cell_counts += a.counts;
    }
    res.n_survivors = n_particles - absorbed;
    res.absorbed_fraction = static_cast<double>(absorbed) / n_particles;
    res.absorbed_fraction_coarse = static_cast<double>(absorbed_coarse) / n_particles;
    return res;
}

} // namespace spdefd
