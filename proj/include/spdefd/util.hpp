#pragma once

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>

namespace spdefd {

/// Compensated (Neumaier) summation over a span, in index order.
/// Used for all Monte Carlo reductions so that results do not depend on the
/// number of worker threads.
inline double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct SampleStats {
    long n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased single-sample variance
    double std_error = 0.0; // sqrt(variance / n)
};

/// Two-pass mean/variance with compensated sums; deterministic in index order.
inline SampleStats sample_stats(std::span<const double> xs) {
    SampleStats s;
    s.n = static_cast<long>(xs.size());
    if (s.n == 0) return s;
    s.mean = neumaier_sum(xs) / static_cast<double>(s.n);
    if (s.n < 2) return s;
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double d = (x - s.mean) * (x - s.mean);
        const double t = sum + d;
        if (std::abs(sum) >= d)
            comp += (sum - t) + d;
        else
            comp += (d - t) + sum;
        sum = t;
    }
    s.variance = (sum + comp) / static_cast<double>(s.n - 1);
    if (s.variance < 0.0) s.variance = 0.0;
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.n));
    return s;
}

/// Round-trip decimal formatting (17 significant digits).
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace spdefd
