#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace fidelity::kernels {

// Numeric kernels with a scalar reference implementation and an AVX2 variant
// selected at runtime.  Every implementation commits to one canonical
// accumulation order (four independent lanes combined as (l0+l2)+(l1+l3),
// then a sequential tail), so results are bit-identical across
// implementations and across repeated runs.

enum class Impl {
    Auto,    // pick the widest implementation the CPU supports
    Scalar,  // force the scalar reference kernels
    Avx2,    // force the AVX2 kernels (throws if unsupported)
};

// Selects the active implementation.  Auto honours the FIDELITY_KERNELS
// environment variable ("scalar" or "avx2") before probing the CPU.
void select(Impl impl);

// Name of the active implementation: "scalar" or "avx2".
std::string active_name();

// True when the host CPU can execute the AVX2 variants.
bool avx2_supported();

// Sum of xs.
double sum(std::span<const double> xs);

// Sum of squared deviations from a fixed value: sum((x - mean)^2).
double sum_sq_dev(std::span<const double> xs, double mean);

// Sum of squared elementwise differences: sum((a - b)^2).  Sizes must match.
double sum_sq_diff(std::span<const double> a, std::span<const double> b);

// Largest absolute elementwise difference.  Sizes must match.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Evaluates the polynomial sum_k coeffs[k] * (x - center)^k by Horner's rule
// at every x in xs, writing into out (same length as xs).
void poly_eval(std::span<const double> coeffs, double center,
               std::span<const double> xs, std::span<double> out);

namespace detail {

struct KernelTable {
    double (*sum)(const double*, std::size_t);
    double (*sum_sq_dev)(const double*, std::size_t, double);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
    double (*max_abs_diff)(const double*, const double*, std::size_t);
    void (*poly_eval)(const double*, std::size_t, double,
                      const double*, std::size_t, double*);
};

const KernelTable& scalar_table();
#if FIDELITY_HAVE_AVX2_TU
const KernelTable& avx2_table();
#endif

}  // namespace detail

}  // namespace fidelity::kernels
