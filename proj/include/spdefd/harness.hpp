#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "spdefd/grid.hpp"
#include "spdefd/model.hpp"
#include "spdefd/path.hpp"
#include "spdefd/random.hpp"
#include "spdefd/scheme.hpp"

namespace spdefd {

/// Monte Carlo statistics of one refinement level's estimator.
struct LevelEstimate {
    int level = 0;
    long n_samples = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< single-sample variance V_l
    double std_error = 0.0; ///< sqrt(V_l / N_l)
};

struct ErrorEstimate {
    double value = 0.0;     ///< mean of the per-path squared error
    double std_error = 0.0; ///< Monte Carlo standard error of the mean
    long samples = 0;
};

/// Setup of a mean-square convergence study against the refinement ladder
/// h_l = h0 2^-l, k_l = k0 4^-l on a uniform grid over [x_lo, x_hi].
struct ConvergenceConfig {
    ModelParams params;
    SchemeParams scheme;
    double h0 = 4.0 / 3.0;
    double k0 = 0.25;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Uniform grid of level l; throws if h_l does not divide the domain.
Grid convergence_grid(const ConvergenceConfig& cfg, int level);

/// Mean-square L2 error at level l against the closed-form solution,
/// averaged over M independent Brownian paths.
ErrorEstimate error_exact(const ConvergenceConfig& cfg, int level, long M);

/// Two-grid error at level l: fine (h, k) vs coarse (2h, 4k) driven by the
/// same Brownian trajectory, compared on the shared nodes.
ErrorEstimate error_two_grid(const ConvergenceConfig& cfg, int level, long M);

struct LevelErrors {
    ErrorEstimate exact2;    ///< E(h,k)^2 estimate (NaN when skipped)
    ErrorEstimate two_grid2; ///< e(h,k)^2 estimate
};

/// Both error measures from one set of fine solves per path.
LevelErrors measure_level(const ConvergenceConfig& cfg, int level, long M,
                          bool with_exact = true);

/// Sampling plan shared by multilevel estimators.
struct MlmcConfig {
    double T = 5.0;
    double k0 = 0.25;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Payoff evaluated at a given level for a given Brownian path. Must be pure:
/// calls run concurrently from worker threads.
using LevelPayoff = std::function<double(int level, const BrownianPath& path)>;

/// Level-l contribution estimator: averages payoff(l) - payoff(l-1) over
/// coupled paths (level 0 averages payoff(0) alone). Fine and coarse share
/// the Brownian trajectory through coarsen_path; samples are independent
/// across paths and levels.
LevelEstimate mlmc_level_estimate(const MlmcConfig& cfg, int level, long n_samples,
                                  const LevelPayoff& payoff);

/// Empirical measure of the interacting particle system sharing the common
/// driver `path`, with independent idiosyncratic noise per particle.
struct ParticleResult {
    double absorbed_fraction = 0.0;        ///< barrier checked at every step
    double absorbed_fraction_coarse = 0.0; ///< barrier checked every coarse_stride steps
    Eigen::VectorXd cell_counts;           ///< surviving particles per grid cell
    long n_particles = 0;
    long n_survivors = 0;
    int coarse_stride = 0;
};

/// Euler evolution of n_particles from x0; with absorbing=true particles at
/// or below zero are removed at the step checks. The coarse-stride absorption
/// count of the same trajectories quantifies the discrete-monitoring error.
/// Idiosyncratic draw (p, n) is stream index p * stride + n with the stride
/// padded to an even step count.
ParticleResult particle_oracle(long n_particles, const BrownianPath& path,
                               const ModelParams& params, const Grid& bin_grid,
                               bool absorbing, const NormalStream& stream,
                               unsigned threads = 0, int coarse_stride = 4);

} // namespace spdefd
