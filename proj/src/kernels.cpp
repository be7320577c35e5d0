#include "fidelity/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace fidelity::kernels {
namespace {

using detail::KernelTable;

const KernelTable* g_active = nullptr;

bool cpu_has_avx2() {
#if FIDELITY_HAVE_AVX2_TU
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const KernelTable& resolve(Impl impl) {
    switch (impl) {
        case Impl::Scalar:
            return detail::scalar_table();
        case Impl::Avx2:
#if FIDELITY_HAVE_AVX2_TU
            if (cpu_has_avx2()) return detail::avx2_table();
#endif
            throw std::runtime_error(
                "kernels: avx2 implementation requested but not supported "
                "on this host");
        case Impl::Auto:
        default: {
            if (const char* env = std::getenv("FIDELITY_KERNELS")) {
                const std::string want(env);
                if (want == "scalar") return resolve(Impl::Scalar);
                if (want == "avx2") return resolve(Impl::Avx2);
                if (!want.empty()) {
                    throw std::runtime_error(
                        "kernels: unknown FIDELITY_KERNELS value '" + want +
                        "' (expected 'scalar' or 'avx2')");
                }
            }
#if FIDELITY_HAVE_AVX2_TU
            if (cpu_has_avx2()) return detail::avx2_table();
#endif
            return detail::scalar_table();
        }
    }
}

const KernelTable& active() {
    if (g_active == nullptr) g_active = &resolve(Impl::Auto);
    return *g_active;
}

}  // namespace

void select(Impl impl) { g_active = &resolve(impl); }

std::string active_name() {
    return &active() == &detail::scalar_table() ? "scalar" : "avx2";
}

bool avx2_supported() { return cpu_has_avx2(); }

double sum(std::span<const double> xs) {
    return active().sum(xs.data(), xs.size());
}

double sum_sq_dev(std::span<const double> xs, double mean) {
    return active().sum_sq_dev(xs.data(), xs.size(), mean);
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("kernels: size mismatch in sum_sq_diff");
    }
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("kernels: size mismatch in max_abs_diff");
    }
    return active().max_abs_diff(a.data(), b.data(), a.size());
}

void poly_eval(std::span<const double> coeffs, double center,
               std::span<const double> xs, std::span<double> out) {
    if (xs.size() != out.size()) {
        throw std::invalid_argument("kernels: size mismatch in poly_eval");
    }
    active().poly_eval(coeffs.data(), coeffs.size(), center, xs.data(),
                       xs.size(), out.data());
}

}  // namespace fidelity::kernels
