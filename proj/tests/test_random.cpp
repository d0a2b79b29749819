#include "doctest.h"

#include <cmath>
#include <vector>

#include "spdefd/random.hpp"
#include "spdefd/util.hpp"

using namespace spdefd;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // reference vectors from the Random123 distribution
    {
        const PhiloxBlock out = philox4x32({0, 0, 0, 0}, 0, 0);
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const PhiloxBlock out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                           0xffffffffu, 0xffffffffu);
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const PhiloxBlock out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                           0xa4093822u, 0x299f31d0u);
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("normal stream is reproducible and stream ids are independent") {
    const NormalStream a{42, 7, 3, StreamPurpose::PathDraws};
    const NormalStream b{42, 7, 3, StreamPurpose::PathDraws};
    const NormalStream c{42, 8, 3, StreamPurpose::PathDraws};
    for (std::uint64_t i = 0; i < 64; ++i) {
        CHECK(a.normal(i) == b.normal(i));
    }
    bool any_diff = false;
    for (std::uint64_t i = 0; i < 64; ++i)
        if (a.normal(i) != c.normal(i)) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("normal stream fill matches indexed access for odd offsets") {
    const NormalStream s{9, 1, 0, StreamPurpose::Generic};
    Eigen::VectorXd buf(11);
    s.fill(buf, 3);
    for (int i = 0; i < buf.size(); ++i)
        CHECK(buf[i] == s.normal(3 + static_cast<std::uint64_t>(i)));
}

TEST_CASE("normal stream moments") {
    const NormalStream s{2024, 0, 0, StreamPurpose::Generic};
    const long n = 200000;
    std::vector<double> xs(n);
    for (long i = 0; i < n; ++i) xs[i] = s.normal(static_cast<std::uint64_t>(i));
    const SampleStats st = sample_stats(xs);
    CHECK(std::abs(st.mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(st.variance == doctest::Approx(1.0).epsilon(0.02));
    // fourth moment ~ 3 for a Gaussian
    double m4 = 0.0;
    for (double x : xs) m4 += x * x * x * x;
    m4 /= static_cast<double>(n);
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.1));
}
