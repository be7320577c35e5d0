#include "fidelity/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 kernel variants.  Each kernel mirrors the scalar reference exactly:
// four accumulator lanes (here one 256-bit register) combined horizontally as
// (lane0 + lane2) + (lane1 + lane3), followed by the same sequential tail.
// No FMA instructions are used, so every intermediate rounding step matches
// the scalar implementation bit for bit on finite inputs.

namespace fidelity::kernels::detail {
namespace {

inline double hsum_like_scalar(__m256d acc) {
    const __m128d low = _mm256_castpd256_pd128(acc);     // [l0, l1]
    const __m128d high = _mm256_extractf128_pd(acc, 1);  // [l2, l3]
    const __m128d pair = _mm_add_pd(low, high);          // [l0+l2, l1+l3]
    return _mm_cvtsd_f64(pair) +
           _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

double avx2_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double total = hsum_like_scalar(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double avx2_sum_sq_dev(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum_like_scalar(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

double avx2_sum_sq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum_like_scalar(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double avx2_max_abs_diff(const double* a, const double* b, std::size_t n) {
    const __m256d abs_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(abs_mask, d));
    }
    const __m128d low = _mm256_castpd256_pd128(acc);
    const __m128d high = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_max_pd(low, high);
    double m = std::fmax(_mm_cvtsd_f64(pair),
                         _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

void avx2_poly_eval(const double* coeffs, std::size_t nc, double center,
                    const double* xs, std::size_t n, double* out) {
    if (nc == 0) {
        for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
        return;
    }
    const __m256d c_vec = _mm256_set1_pd(center);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_sub_pd(_mm256_loadu_pd(xs + i), c_vec);
        __m256d r = _mm256_set1_pd(coeffs[nc - 1]);
        for (std::size_t k = nc - 1; k-- > 0;) {
            r = _mm256_add_pd(_mm256_mul_pd(r, t), _mm256_set1_pd(coeffs[k]));
        }
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        const double t = xs[i] - center;
        double r = coeffs[nc - 1];
        for (std::size_t k = nc - 1; k-- > 0;) r = r * t + coeffs[k];
        out[i] = r;
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table = {
        avx2_sum,
        avx2_sum_sq_dev,
        avx2_sum_sq_diff,
        avx2_max_abs_diff,
        avx2_poly_eval,
    };
    return table;
}

}  // namespace fidelity::kernels::detail
