#include "spdefd/path.hpp"

#include <cmath>
#include <stdexcept>

namespace spdefd {

BrownianPath sample_path(double T, double k, const NormalStream& stream) {
    if (!(T > 0.0 && k > 0.0)) throw std::domain_error("sample_path: need T, k > 0");
    const double ratio = T / k;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
        throw std::domain_error("sample_path: T/k must be a positive integer");
    BrownianPath p;
    p.k = k;
    p.draws.resize(n);
    stream.fill(p.draws);
    return p;
}

BrownianPath sample_path(double T, double k, std::uint64_t seed) {
    return sample_path(T, k, NormalStream{seed, 0, 0, StreamPurpose::PathDraws});
}

BrownianPath coarsen_path(const BrownianPath& fine) {
    const long n = fine.steps();
    if (n % 4 != 0)
        throw std::domain_error("coarsen_path: draw count must be divisible by 4");
    BrownianPath coarse;
    coarse.k = 4.0 * fine.k;
    coarse.draws.resize(n / 4);
    // sqrt(4k) Z_c = sum of the four fine increments sqrt(k) Z_n
    for (long m = 0; m < n / 4; ++m)
        coarse.draws[m] = 0.5 * fine.draws.segment(4 * m, 4).sum();
    return coarse;
}

std::pair<double, double> level_sequence(int level, double h0, double k0) {
    if (level < 0) throw std::domain_error("level_sequence: need level >= 0");
    return {h0 * std::pow(2.0, -level), k0 * std::pow(4.0, -level)};
}

} // namespace spdefd
