#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fidelity/rng.hpp"

using fidelity::RandomStream;
using fidelity::mix_u64;

TEST_CASE("raw engine matches the standardized mt19937_64 sequence") {
    // The C++ standard pins this value for the default-seeded engine, so it
    // anchors the whole stream against accidental engine or seeding changes.
    RandomStream rs(std::mt19937_64::default_seed);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rs.next_u64();
    CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("identical seeds produce identical draws") {
    RandomStream a(123), b(123);
    for (int i = 0; i < 200; ++i) {
        CHECK(a.uniform01() == b.uniform01());
        CHECK(a.standard_normal() == b.standard_normal());
        CHECK(a.normal(5.0, 2.0) == b.normal(5.0, 2.0));
    }
}

TEST_CASE("uniform01 is the top-53-bit mapping of the engine") {
    RandomStream rs(7);
    std::mt19937_64 raw(7);
    for (int i = 0; i < 100; ++i) {
        const double expected =
            static_cast<double>(raw() >> 11) * 0x1.0p-53;
        CHECK(rs.uniform01() == expected);
    }
}

TEST_CASE("uniform ranges and argument checking") {
    RandomStream rs(99);
    for (int i = 0; i < 1000; ++i) {
        const double u = rs.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = rs.uniform(-3.0, 2.0);
        CHECK(v >= -3.0);
        CHECK(v < 2.0);
    }
    CHECK_THROWS_AS((void)rs.uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)rs.uniform(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("standard_normal consumes exactly two engine steps") {
    RandomStream rs(31415);
    std::mt19937_64 raw(31415);
    for (int i = 0; i < 50; ++i) {
        (void)rs.standard_normal();
        raw.discard(2);
        CHECK(rs.next_u64() == raw());
    }
}

TEST_CASE("standard_normal matches the Box-Muller cosine branch") {
    RandomStream rs(2718);
    std::mt19937_64 raw(2718);
    for (int i = 0; i < 100; ++i) {
        const double u1 =
            (static_cast<double>(raw() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(raw() >> 11) * 0x1.0p-53;
        const double expected = std::sqrt(-2.0 * std::log(u1)) *
                                std::cos(2.0 * std::numbers::pi * u2);
        CHECK(rs.standard_normal() == expected);
    }
}

TEST_CASE("normal scales and shifts; rejects negative stddev") {
    RandomStream a(5), b(5);
    for (int i = 0; i < 20; ++i) {
        CHECK(a.normal(10.0, 3.0) == 10.0 + 3.0 * b.standard_normal());
    }
    CHECK_THROWS_AS((void)a.normal(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("truncated_normal stays inside the bounds") {
    RandomStream rs(77);
    for (int i = 0; i < 2000; ++i) {
        const double d = rs.truncated_normal(0.0, 1.0, -0.5, 0.5);
        CHECK(d >= -0.5);
        CHECK(d <= 0.5);
    }
    // Wide bounds never reject, so the draw equals the plain normal.
    RandomStream a(8), b(8);
    for (int i = 0; i < 50; ++i) {
        CHECK(a.truncated_normal(2.0, 1.0, -1e9, 1e9) == b.normal(2.0, 1.0));
    }
    CHECK(rs.truncated_normal(3.0, 0.0, 0.0, 5.0) == 3.0);
    CHECK_THROWS_AS((void)rs.truncated_normal(9.0, 0.0, 0.0, 5.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)rs.truncated_normal(0.0, 1e-12, 100.0, 101.0),
                    std::runtime_error);
    CHECK_THROWS_AS((void)rs.truncated_normal(0.0, 1.0, 1.0, -1.0),
                    std::invalid_argument);
}

TEST_CASE("substreams are order independent and distinct") {
    const std::uint64_t master = 42;

    // Construct run 3's stream before and after run 0's; same sequence.
    std::vector<double> first;
    {
        auto s3 = RandomStream::substream(master, 3);
        for (int i = 0; i < 10; ++i) first.push_back(s3.uniform01());
    }
    {
        auto s0 = RandomStream::substream(master, 0);
        (void)s0.uniform01();
        auto s3 = RandomStream::substream(master, 3);
        for (int i = 0; i < 10; ++i) CHECK(s3.uniform01() == first[i]);
    }

    // Different indices give different sequences.
    auto sa = RandomStream::substream(master, 1);
    auto sb = RandomStream::substream(master, 2);
    int same = 0;
    for (int i = 0; i < 64; ++i) {
        if (sa.next_u64() == sb.next_u64()) ++same;
    }
    CHECK(same == 0);

    // The derivation is the documented mixing of master and index.
    auto sc = RandomStream::substream(master, 9);
    RandomStream sd(mix_u64(master ^ mix_u64(10)));
    CHECK(sc.next_u64() == sd.next_u64());
}

TEST_CASE("mix_u64 is a bijective scrambler on sample points") {
    // Distinct inputs map to distinct outputs and shift most bits.
    CHECK(mix_u64(0) != 0);
    CHECK(mix_u64(1) != mix_u64(2));
    CHECK(mix_u64(0x123456789ABCDEFULL) != 0x123456789ABCDEFULL);
}

TEST_CASE("distribution sanity windows") {
    RandomStream rs(2024);
    const int n = 20000;
    double usum = 0.0;
    for (int i = 0; i < n; ++i) usum += rs.uniform01();
    CHECK(usum / n == doctest::Approx(0.5).epsilon(0.02));

    double zsum = 0.0, zsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rs.standard_normal();
        zsum += z;
        zsq += z * z;
    }
    const double zmean = zsum / n;
    const double zstd = std::sqrt(zsq / n - zmean * zmean);
    CHECK(std::fabs(zmean) < 0.05);
    CHECK(zstd == doctest::Approx(1.0).epsilon(0.05));
}
