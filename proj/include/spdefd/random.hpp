#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace spdefd {

using PhiloxBlock = std::array<std::uint32_t, 4>;

/// Philox-4x32-10 block cipher (Salmon et al. counter-based generator).
/// Stateless: the output is a pure function of (counter, key), which is what
/// makes every draw addressable and the simulations reproducible under any
/// parallel schedule.
inline PhiloxBlock philox4x32(PhiloxBlock ctr, std::uint32_t key0, std::uint32_t key1) {
    constexpr std::uint32_t mult0 = 0xD2511F53u;
    constexpr std::uint32_t mult1 = 0xCD9E8D57u;
    constexpr std::uint32_t weyl0 = 0x9E3779B9u;
    constexpr std::uint32_t weyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key0 += weyl0;
            key1 += weyl1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(mult0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(mult1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key0,
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key1,
               static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

/// Purpose tag of a random stream; keeps logically distinct consumers of the
/// same (seed, level, path) triple from colliding.
enum class StreamPurpose : std::uint16_t {
    Generic = 0,
    PathDraws = 1,
    ParticleNoise = 2,
    ModeDecay = 3,
};

/// Addressable stream of standard normal draws.
///
/// Stream identity is (seed, level, path, purpose); within a stream, draw i
/// is a pure function of i. Identical ids give identical draws on every run
/// and for every thread count.
struct NormalStream {
    std::uint64_t seed = 0;
    std::uint32_t path = 0;
    std::uint16_t level = 0;
    StreamPurpose purpose = StreamPurpose::Generic;

    /// Two independent N(0,1) values for the given counter block (Box-Muller).
    std::pair<double, double> normal_pair(std::uint64_t block) const {
        const PhiloxBlock ctr{static_cast<std::uint32_t>(block),
                              static_cast<std::uint32_t>(block >> 32),
                              path,
                              (static_cast<std::uint32_t>(purpose) << 16) |
                                  static_cast<std::uint32_t>(level)};
        const PhiloxBlock r = philox4x32(ctr, static_cast<std::uint32_t>(seed),
                                         static_cast<std::uint32_t>(seed >> 32));
        const auto unit = [](std::uint32_t hi, std::uint32_t lo) {
            const std::uint64_t w = (static_cast<std::uint64_t>(hi) << 32) | lo;
            // 53-bit uniform on (0, 1]; strictly positive so log() is safe
            return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
        };
        const double u1 = unit(r[0], r[1]);
        const double u2 = unit(r[2], r[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Draw i of the stream.
    double normal(std::uint64_t i) const {
        const auto p = normal_pair(i >> 1);
        return (i & 1u) ? p.second : p.first;
    }

    /// Fill `out` with draws [start, start + out.size()) of the stream.
    void fill(Eigen::Ref<Eigen::VectorXd> out, std::uint64_t start = 0) const {
        const auto n = static_cast<std::uint64_t>(out.size());
        std::uint64_t i = 0;
        if (n > 0 && (start & 1u)) {
            out[0] = normal(start);
            i = 1;
        }
        for (; i + 1 < n; i += 2) {
            const auto p = normal_pair((start + i) >> 1);
            out[static_cast<Eigen::Index>(i)] = p.first;
            out[static_cast<Eigen::Index>(i) + 1] = p.second;
        }
        if (i < n) out[static_cast<Eigen::Index>(i)] = normal(start + i);
    }
};

} // namespace spdefd
