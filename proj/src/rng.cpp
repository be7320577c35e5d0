#include "fidelity/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fidelity {

std::uint64_t mix_u64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t master,
                                     std::uint64_t index) {
    return RandomStream(mix_u64(master ^ mix_u64(index + 1)));
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("uniform: lo must be < hi");
    }
    return lo + (hi - lo) * uniform01();
}

double RandomStream::standard_normal() {
    // u1 mapped to (0, 1] so that log(u1) is always finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::normal(double mean, double stddev) {
    if (stddev < 0.0) {
        throw std::invalid_argument("normal: stddev must be >= 0");
    }
    return mean + stddev * standard_normal();
}

double RandomStream::truncated_normal(double mean, double stddev, double lo,
                                      double hi) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("truncated_normal: lo must be <= hi");
    }
    if (stddev == 0.0) {
        if (mean < lo || mean > hi) {
            throw std::invalid_argument(
                "truncated_normal: zero-variance mean outside bounds");
        }
        return mean;
    }
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double draw = normal(mean, stddev);
        if (draw >= lo && draw <= hi) return draw;
    }
    throw std::runtime_error(
        "truncated_normal: acceptance region too improbable");
}

}  // namespace fidelity
