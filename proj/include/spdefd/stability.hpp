#pragma once

#include <cstdint>

#include "spdefd/random.hpp"

namespace spdefd {

/// Outcome of the closed-form stability classification for one parameter set,
/// cross-checked against a sweep of the per-mode amplification factor.
struct StabilityReport {
    double f = 0.0;           ///< stability function value
    bool unconditional = false; ///< f <= 0
    double max_ratio = 0.0;   ///< admissible bound on k/h^2 (infinity when unconditional)
    double lambda = 0.0;      ///< the queried k/h^2
    bool stable = false;      ///< verdict for the queried (k, h)
    double sup_g = 0.0;       ///< sup of G over the phi sweep
    double argmax_phi = 0.0;
    bool sweep_consistent = false; ///< sweep sup agrees with the closed form
};

/// Mean-square stability function f = 1 - 2 (theta - rho sigma - rho^2).
/// The scheme is unconditionally stable iff f <= 0, otherwise stable iff
/// k/h^2 < 1/f.
double stability_function(double rho, double theta, double sigma);

/// One-step mean-square amplification of the Fourier mode with angle phi:
///   G = [(1 + k a (1-theta+rho sigma))^2 + k c^2 + 2 k^2 rho^2 a^2]
///       / (1 - k a (theta - rho sigma))^2
/// with a = -(2/h^2) sin^2(phi/2) and c = (sqrt(rho)/h) sin(phi).
double amplification(double phi, double k, double h, double rho, double theta,
                     double sigma);

/// Closed-form verdict for (k, h) plus a 1024-point phi sweep of G as a
/// numerical cross-check.
StabilityReport classify(double rho, double theta, double sigma, double k, double h);

struct ModeDecayResult {
    double estimate = 0.0;    ///< Monte Carlo estimate of (E|X_n|^2)^(1/n)
    double std_error = 0.0;   ///< delta-method standard error of the estimate
    double closed_form = 0.0; ///< G(phi) for comparison
    long n_steps = 0;
    long n_samples = 0;
};

/// Monte Carlo growth-rate estimate from the scalar one-step recursion of the
/// mode amplitude. Requires n_samples >= 1000. Overflow in unstable regimes
/// reports an infinite growth rate rather than an error.
ModeDecayResult empirical_mode_decay(double phi, double k, double h, double rho,
                                     double theta, double sigma, long n_steps,
                                     long n_samples, std::uint64_t seed,
                                     unsigned threads = 0);

} // namespace spdefd
