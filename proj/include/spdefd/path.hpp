#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "spdefd/random.hpp"

namespace spdefd {

/// Discretised Brownian driver: N independent standard normal draws Z_n with
/// increments sqrt(k) Z_n over steps of size k.
struct BrownianPath {
    double k = 0.0;
    Eigen::VectorXd draws;

    long steps() const { return static_cast<long>(draws.size()); }
    double horizon() const { return k * static_cast<double>(draws.size()); }

    /// Brownian value after step n (M at time n*k).
    double value_after(long n) const {
        return std::sqrt(k) * draws.head(n).sum();
    }
    /// Terminal Brownian value M_T.
    double terminal() const { return std::sqrt(k) * draws.sum(); }
};

/// Sample a path of T/k draws from the given stream. T/k must be integral.
BrownianPath sample_path(double T, double k, const NormalStream& stream);

/// Convenience overload keyed by seed alone.
BrownianPath sample_path(double T, double k, std::uint64_t seed);

/// Aggregate groups of four fine increments into one coarse step of size 4k.
/// The coarse path traverses the same Brownian trajectory at coarse times.
BrownianPath coarsen_path(const BrownianPath& fine);

/// Mesh refinement ladder h_l = h0 2^-l, k_l = k0 4^-l (k/h^2 constant in l).
std::pair<double, double> level_sequence(int level, double h0, double k0);

} // namespace spdefd
