#include "fidelity/kernels.hpp"

#include <cmath>

// Scalar reference kernels.  The blocked four-lane accumulation below is the
// canonical order for the whole project: the SIMD variants reproduce it
// exactly, so switching implementations never changes a single bit.

namespace fidelity::kernels::detail {
namespace {

double scalar_sum(const double* x, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += x[i];
        a1 += x[i + 1];
        a2 += x[i + 2];
        a3 += x[i + 3];
    }
    double total = (a0 + a2) + (a1 + a3);
    for (; i < n; ++i) total += x[i];
    return total;
}

double scalar_sum_sq_dev(const double* x, std::size_t n, double mean) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = x[i] - mean;
        const double d1 = x[i + 1] - mean;
        const double d2 = x[i + 2] - mean;
        const double d3 = x[i + 3] - mean;
        a0 += d0 * d0;
        a1 += d1 * d1;
        a2 += d2 * d2;
        a3 += d3 * d3;
    }
    double total = (a0 + a2) + (a1 + a3);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

double scalar_sum_sq_diff(const double* a, const double* b, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = a[i] - b[i];
        const double d1 = a[i + 1] - b[i + 1];
        const double d2 = a[i + 2] - b[i + 2];
        const double d3 = a[i + 3] - b[i + 3];
        a0 += d0 * d0;
        a1 += d1 * d1;
        a2 += d2 * d2;
        a3 += d3 * d3;
    }
    double total = (a0 + a2) + (a1 + a3);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double scalar_max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m0 = std::fmax(m0, std::fabs(a[i] - b[i]));
        m1 = std::fmax(m1, std::fabs(a[i + 1] - b[i + 1]));
        m2 = std::fmax(m2, std::fabs(a[i + 2] - b[i + 2]));
        m3 = std::fmax(m3, std::fabs(a[i + 3] - b[i + 3]));
    }
    double m = std::fmax(std::fmax(m0, m2), std::fmax(m1, m3));
    for (; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

void scalar_poly_eval(const double* coeffs, std::size_t nc, double center,
                      const double* xs, std::size_t n, double* out) {
    if (nc == 0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double t = xs[i] - center;
        double r = coeffs[nc - 1];
        for (std::size_t k = nc - 1; k-- > 0;) r = r * t + coeffs[k];
        out[i] = r;
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table = {
        scalar_sum,
        scalar_sum_sq_dev,
        scalar_sum_sq_diff,
        scalar_max_abs_diff,
        scalar_poly_eval,
    };
    return table;
}

}  // namespace fidelity::kernels::detail
