#include "fidelity/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fidelity/kernels.hpp"
#include "fidelity/rng.hpp"

namespace fidelity::surrogate {
namespace {

double checked(double y, const char* what) {
    if (!std::isfinite(y)) {
        throw std::domain_error(std::string("non-finite value from ") + what);
    }
    return y;
}

}  // namespace

double PolynomialModel::operator()(double x) const {
    if (coefficients.empty()) return 0.0;
    const double t = x - center;
    double r = coefficients.back();
    for (std::size_t k = coefficients.size() - 1; k-- > 0;) {
        r = r * t + coefficients[k];
    }
    return r;
}

std::vector<double> PolynomialModel::eval(std::span<const double> xs) const {
    std::vector<double> out(xs.size());
    kernels::poly_eval(coefficients, center, xs, out);
    return out;
}

PolynomialModel PolynomialModel::derivative() const {
    PolynomialModel d;
    d.center = center;
    d.provenance = provenance;
    if (coefficients.size() <= 1) {
        d.coefficients = {0.0};
        return d;
    }
    d.coefficients.resize(coefficients.size() - 1);
    for (std::size_t k = 1; k < coefficients.size(); ++k) {
        d.coefficients[k - 1] = static_cast<double>(k) * coefficients[k];
    }
    return d;
}

PolynomialModel interpolate_equispaced(const scenario::RealFn& fn, double a,
                                       double b, int degree) {
    if (!(a < b)) {
        throw std::invalid_argument("interpolation: interval must have a < b");
    }
    if (degree < 1 || degree > kMaxInterpolationDegree) {
        throw std::invalid_argument(
            "interpolation: degree must lie in [1, 12]; choose a lower "
            "degree");
    }
    const auto n = static_cast<std::size_t>(degree);
    const double h = (b - a) / static_cast<double>(degree);
    std::vector<double> nodes(n + 1), dd(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        nodes[i] = a + static_cast<double>(i) * h;
        dd[i] = checked(fn(nodes[i]), "interpolation node evaluation");
    }
    const std::vector<double> node_values = dd;

    // In-place divided differences: dd[i] becomes f[x_0, ..., x_i].
    for (std::size_t level = 1; level <= n; ++level) {
        for (std::size_t i = n; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }

    // Expand the Newton form into the shifted monomial basis about the
    // interval midpoint: repeatedly multiply by (t - (x_k - center)) and add
    // the next divided difference.
    PolynomialModel model;
    model.center = 0.5 * (a + b);
    model.provenance = PolynomialModel::Provenance::Interpolant;
    std::vector<double> coeffs = {dd[n]};
    for (std::size_t k = n; k-- > 0;) {
        const double shift = nodes[k] - model.center;
        std::vector<double> next(coeffs.size() + 1, 0.0);
        next[0] = dd[k] - shift * coeffs[0];
        for (std::size_t j = 1; j < next.size(); ++j) {
            const double higher = j < coeffs.size() ? coeffs[j] : 0.0;
            next[j] = coeffs[j - 1] - shift * higher;
        }
        coeffs = std::move(next);
    }
    model.coefficients = std::move(coeffs);

    // Conditioning check: the construction must reproduce its own nodes.
    double max_y = 1.0;
    for (const double y : node_values) max_y = std::fmax(max_y, std::fabs(y));
    const std::vector<double> reproduced = model.eval(nodes);
    const double residual = kernels::max_abs_diff(reproduced, node_values);
    if (residual > 1e-9 * max_y) {
        throw std::domain_error(
            "interpolation: node system is ill conditioned; choose a lower "
            "degree");
    }
    return model;
}

ErrorBound interpolation_error_bound(double derivative_bound, int degree,
                                     double a, double b) {
    if (!(a < b)) {
        throw std::invalid_argument("error bound: interval must have a < b");
    }
    if (degree < 1) {
        throw std::invalid_argument("error bound: degree must be >= 1");
    }
    if (!(derivative_bound >= 0.0)) {
        throw std::invalid_argument(
            "error bound: derivative bound must be >= 0");
    }
    ErrorBound eb;
    eb.degree = degree;
    eb.derivative_bound = derivative_bound;
    eb.spacing = (b - a) / static_cast<double>(degree);
    eb.bound = derivative_bound *
               std::pow(eb.spacing, static_cast<double>(degree + 1)) /
               (4.0 * static_cast<double>(degree + 1));
    return eb;
}

PolynomialModel taylor_model(std::span<const double> derivatives,
                             double center) {
    if (derivatives.empty()) {
        throw std::invalid_argument(
            "taylor model: need at least the order-zero derivative");
    }
    PolynomialModel model;
    model.center = center;
    model.provenance = PolynomialModel::Provenance::Taylor;
    model.coefficients.resize(derivatives.size());
    double factorial = 1.0;
    for (std::size_t k = 0; k < derivatives.size(); ++k) {
        if (k > 0) factorial *= static_cast<double>(k);
        if (!std::isfinite(factorial)) {
            throw std::invalid_argument("taylor model: order too large");
        }
        model.coefficients[k] = derivatives[k] / factorial;
    }
    return model;
}

std::vector<PolynomialModel> taylor_family(const DerivativeFn& fn,
                                           double center,
                                           std::span<const int> orders) {
    std::vector<PolynomialModel> out;
    out.reserve(orders.size());
    for (const int order : orders) {
        if (order < 0) {
            throw std::invalid_argument("taylor family: order must be >= 0");
        }
        std::vector<double> derivs(static_cast<std::size_t>(order) + 1);
        for (int k = 0; k <= order; ++k) {
            derivs[static_cast<std::size_t>(k)] =
                checked(fn(k, center), "derivative oracle");
        }
        out.push_back(taylor_model(derivs, center));
    }
    return out;
}

PolynomialModel fit_least_squares(std::span<const double> xs,
                                  std::span<const double> ys, int degree) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("least squares: xs/ys size mismatch");
    }
    if (degree < 0) {
        throw std::invalid_argument("least squares: degree must be >= 0");
    }
    const std::size_t m = xs.size();
    const std::size_t p = static_cast<std::size_t>(degree) + 1;
    if (m < p) {
        throw std::invalid_argument(
            "least squares: need at least degree+1 samples");
    }

    // Shifted, scaled basis t = (x - center)/scale for conditioning.
    const double center = kernels::sum(xs) / static_cast<double>(m);
    double scale = 0.0;
    for (const double x : xs) scale = std::fmax(scale, std::fabs(x - center));
    if (scale == 0.0) {
        if (degree == 0) {
            PolynomialModel c;
            c.center = center;
            c.coefficients = {kernels::sum(ys) / static_cast<double>(m)};
            c.provenance = PolynomialModel::Provenance::LeastSquares;
            return c;
        }
        throw std::domain_error(
            "least squares: rank-deficient system (all inputs identical)");
    }

    // Column-major Vandermonde in the scaled basis.
    std::vector<double> A(m * p);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = (xs[i] - center) / scale;
        double pw = 1.0;
        for (std::size_t k = 0; k < p; ++k) {
            A[k * m + i] = pw;
            pw *= t;
        }
    }
    std::vector<double> rhs(ys.begin(), ys.end());

    // Householder QR, applied to A and rhs simultaneously.
    for (std::size_t k = 0; k < p; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) {
            norm = std::hypot(norm, A[k * m + i]);
        }
        if (norm <= 1e-12 * std::sqrt(static_cast<double>(m))) {
            throw std::domain_error(
                "least squares: rank-deficient system (collinear basis "
                "columns)");
        }
        if (A[k * m + k] > 0.0) norm = -norm;
        std::vector<double> v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = A[k * m + i];
        v[0] -= norm;
        double vnorm2 = 0.0;
        for (const double vi : v) vnorm2 += vi * vi;
        if (vnorm2 == 0.0) continue;
        A[k * m + k] = norm;
        for (std::size_t i = k + 1; i < m; ++i) A[k * m + i] = 0.0;
        for (std::size_t j = k + 1; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) {
                dot += v[i - k] * A[j * m + i];
            }
            const double coef = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) {
                A[j * m + i] -= coef * v[i - k];
            }
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * rhs[i];
        const double coef = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) rhs[i] -= coef * v[i - k];
    }

    // Back substitution on the p x p upper triangle.
    std::vector<double> beta(p);
    for (std::size_t k = p; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < p; ++j) s -= A[j * m + k] * beta[j];
        beta[k] = s / A[k * m + k];
    }

    PolynomialModel model;
    model.center = center;
    model.provenance = PolynomialModel::Provenance::LeastSquares;
    model.coefficients.resize(p);
    double spow = 1.0;
    for (std::size_t k = 0; k < p; ++k) {
        model.coefficients[k] = beta[k] / spow;
        spow *= scale;
    }
    return model;
}

SurrogateFidelity surrogate_fidelity_check(const PolynomialModel& surrogate,
                                           const scenario::RealFn& referent,
                                           const scenario::ScenarioDomain& domain,
                                           double noise_std, int mc_runs,
                                           std::uint64_t seed) {
    domain.validate();
    if (mc_runs < 100) {
        throw std::invalid_argument(
            "surrogate check: at least 100 Monte Carlo runs required");
    }
    if (!(noise_std >= 0.0)) {
        throw std::invalid_argument("surrogate check: noise std must be >= 0");
    }

    RandomStream rs(seed);
    const auto n = static_cast<std::size_t>(mc_runs);
    std::vector<double> xs(n), referent_samples(n), noise(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = rs.uniform(domain.lo, domain.hi);
        referent_samples[i] =
            checked(referent(xs[i]), "referent during Monte Carlo");
        noise[i] = rs.normal(0.0, noise_std);
    }
    std::vector<double> surrogate_samples = surrogate.eval(xs);
    for (std::size_t i = 0; i < n; ++i) {
        // The same environment-noise realization perturbs both streams.
        referent_samples[i] += noise[i];
        surrogate_samples[i] += noise[i];
    }

    SurrogateFidelity out;
    out.referent_summary = metrics::summarize(referent_samples);
    out.surrogate_summary = metrics::summarize(surrogate_samples);
    if (!(out.referent_summary.std > 0.0)) {
        throw std::domain_error(
            "degenerate output summary: referent stream has zero variance");
    }
    if (!(out.surrogate_summary.std > 0.0)) {
        throw std::domain_error(
            "degenerate output summary: surrogate stream has zero variance");
    }
    out.f_referent =
        metrics::fidelity_score(out.referent_summary, out.referent_summary).f;
    out.f_surrogate =
        metrics::fidelity_score(out.surrogate_summary, out.referent_summary).f;
    return out;
}

}  // namespace fidelity::surrogate
