#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fidelity/metrics.hpp"
#include "fidelity/scenario.hpp"

namespace fidelity::surrogate {

// Polynomial in powers of (x - center).  The shifted basis keeps evaluation
// well conditioned near the expansion/interpolation region and makes the
// constant coefficient the exact value at the center.
struct PolynomialModel {
    enum class Provenance { Interpolant, Taylor, LeastSquares };

    double center = 0.0;
    std::vector<double> coefficients;  // coefficients[k] multiplies (x-center)^k
    Provenance provenance = Provenance::Interpolant;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    // Single-point Horner evaluation.
    double operator()(double x) const;

    // Batch evaluation through the runtime-dispatched kernels.
    std::vector<double> eval(std::span<const double> xs) const;

    // Formal derivative (degree reduced by one; constant -> zero polynomial).
    PolynomialModel derivative() const;
};

// Largest interpolation degree accepted before conditioning becomes a
// practical concern on equispaced nodes.
inline constexpr int kMaxInterpolationDegree = 12;

// Interpolates fn on degree+1 equispaced nodes over [a, b] (Newton divided
// differences, converted to the shifted monomial basis about the interval
// midpoint).  Throws std::invalid_argument for degrees outside [1, 12] and
// std::domain_error (advising a lower degree) if the node residuals reveal
// ill conditioning.
PolynomialModel interpolate_equispaced(const scenario::RealFn& fn, double a,
                                       double b, int degree);

// Worst-case equispaced-interpolation error bound
//   bound = derivative_bound * spacing^(degree+1) / (4 * (degree + 1)).
struct ErrorBound {
    double bound = 0.0;
    double derivative_bound = 0.0;  // max |f^(degree+1)| over [a, b]
    double spacing = 0.0;           // (b - a) / degree
    int degree = 0;
};

ErrorBound interpolation_error_bound(double derivative_bound, int degree,
                                     double a, double b);

// Taylor model from the derivative values f(a), f'(a), ..., f^(n)(a).
PolynomialModel taylor_model(std::span<const double> derivatives,
                             double center);

// k-th derivative oracle: fn(k, x); k = 0 is the function value.
using DerivativeFn = std::function<double(int, double)>;

// Taylor models of the requested orders about one center, in input order.
std::vector<PolynomialModel> taylor_family(const DerivativeFn& fn,
                                           double center,
                                           std::span<const int> orders);

// Least-squares polynomial fit (Householder QR on a scaled shifted basis).
// Requires at least degree+1 samples; throws std::domain_error on
// rank-deficient systems.
PolynomialModel fit_least_squares(std::span<const double> xs,
                                  std::span<const double> ys, int degree);

// Monte Carlo fidelity of a surrogate against the referent function it was
// built from.  Each run draws one input uniformly from the domain and one
// shared noise value applied to both output streams, so an exact surrogate
// reproduces the referent samples identically.
struct SurrogateFidelity {
    double f_surrogate = 0.0;
    double f_referent = 0.0;  // self-fidelity of the referent stream: 1
    metrics::SampleSummary surrogate_summary;
    metrics::SampleSummary referent_summary;
};

SurrogateFidelity surrogate_fidelity_check(const PolynomialModel& surrogate,
                                           const scenario::RealFn& referent,
                                           const scenario::ScenarioDomain& domain,
                                           double noise_std, int mc_runs,
                                           std::uint64_t seed);

}  // namespace fidelity::surrogate
