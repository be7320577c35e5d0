#pragma once

#include <cstdint>
#include <random>

namespace fidelity {

// Deterministic random stream used by every stochastic routine in the
// toolkit.  std::mt19937_64 has a standardized output sequence, but the
// standard *distributions* do not, so the value mappings (uniform doubles,
// Box-Muller normals, truncation by resampling) are implemented here by hand.
// Identical seeds therefore produce identical draws on every platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Stream for run `index` under `master`: a deterministic mixing of the
    // two values, so per-run results are independent of evaluation order.
    static RandomStream substream(std::uint64_t master, std::uint64_t index);

    // Raw 64-bit engine output.
    std::uint64_t next_u64() { return engine_(); }

    // Uniform draw in [0, 1): 53 random mantissa bits.
    double uniform01();

    // Uniform draw in [lo, hi).
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller (cosine branch, no cached spare, so the
    // draw count per call is always exactly two engine steps).
    double standard_normal();

    // Normal with the given mean and standard deviation (stddev >= 0).
    double normal(double mean, double stddev);

    // Normal truncated to [lo, hi] by resampling.
    double truncated_normal(double mean, double stddev, double lo, double hi);

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used for sub-stream seed derivation.
std::uint64_t mix_u64(std::uint64_t x);

}  // namespace fidelity
