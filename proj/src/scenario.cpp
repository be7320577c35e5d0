#include "fidelity/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fidelity::scenario {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double checked_eval(const RealFn& fn, double x, const char* role) {
    const double y = fn(x);
    if (!std::isfinite(y)) {
        throw std::domain_error(std::string("non-finite ") + role +
                                " output at input x=" + fmt(x));
    }
    return y;
}

bool point_valid(const RealFn& model, const RealFn& referent, double x,
                 const ValidityCriterion& criterion) {
    const double m = checked_eval(model, x, "model");
    const double r = checked_eval(referent, x, "referent");
    const double err = std::fabs(m - r);
    if (criterion.kind == ValidityCriterion::Kind::AbsoluteError) {
        return err <= criterion.threshold;
    }
    if (r == 0.0) {
        // Relative error at a referent zero: valid only when both are zero.
        return m == 0.0;
    }
    return err <= criterion.threshold * std::fabs(r);
}

// Refines the boundary between a valid point and an invalid point down to
// tol, returning the valid-side end of the final bracket.
double refine_boundary(const RealFn& model, const RealFn& referent,
                       const ValidityCriterion& criterion, double valid_x,
                       double invalid_x, double tol) {
    while (std::fabs(invalid_x - valid_x) > tol) {
        const double mid = 0.5 * (valid_x + invalid_x);
        if (mid == valid_x || mid == invalid_x) break;
        if (point_valid(model, referent, mid, criterion)) {
            valid_x = mid;
        } else {
            invalid_x = mid;
        }
    }
    return valid_x;
}

}  // namespace

void ScenarioDomain::validate() const {
    if (!(lo < hi)) {
        throw std::invalid_argument("scenario domain: lo must be < hi");
    }
    if (!(resolution > 0.0)) {
        throw std::invalid_argument(
            "scenario domain: resolution must be > 0");
    }
    if ((hi - lo) / resolution < 2.0 - 1e-9) {
        throw std::invalid_argument(
            "scenario domain: grid must contain at least three points");
    }
}

std::vector<double> grid_points(const ScenarioDomain& domain) {
    domain.validate();
    const double span = domain.hi - domain.lo;
    const auto steps =
        static_cast<std::size_t>(std::floor(span / domain.resolution + 1e-9));
    std::vector<double> xs;
    xs.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) {
        xs.push_back(domain.lo + static_cast<double>(i) * domain.resolution);
    }
    // hi is always the final point, exactly.
    if (std::fabs(xs.back() - domain.hi) <= 1e-9 * domain.resolution) {
        xs.back() = domain.hi;
    } else {
        xs.push_back(domain.hi);
    }
    return xs;
}

ResponseTrace trace(const RealFn& fn, const ScenarioDomain& domain) {
    ResponseTrace out;
    out.inputs = grid_points(domain);
    out.outputs.reserve(out.inputs.size());
    for (const double x : out.inputs) {
        out.outputs.push_back(checked_eval(fn, x, "trace"));
    }
    return out;
}

ValidityRange validity_range(const RealFn& model, const RealFn& referent,
                             const ScenarioDomain& domain,
                             const ValidityCriterion& criterion) {
    if (!(criterion.threshold > 0.0)) {
        throw std::invalid_argument(
            "validity criterion: threshold must be > 0");
    }
    const std::vector<double> xs = grid_points(domain);
    std::vector<char> valid(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        valid[i] = point_valid(model, referent, xs[i], criterion) ? 1 : 0;
    }

    const double tol = domain.resolution / 100.0;
    ValidityRange out;
    out.criterion = criterion;
    std::size_t i = 0;
    while (i < xs.size()) {
        if (!valid[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < xs.size() && valid[j + 1]) ++j;
        double left = xs[i];
        if (i > 0) {
            left = refine_boundary(model, referent, criterion, xs[i],
                                   xs[i - 1], tol);
        }
        double right = xs[j];
        if (j + 1 < xs.size()) {
            right = refine_boundary(model, referent, criterion, xs[j],
                                    xs[j + 1], tol);
        }
        out.intervals.emplace_back(left, right);
        i = j + 1;
    }
    return out;
}

double total_width(const ValidityRange& range) {
    double w = 0.0;
    for (const auto& [lo, hi] : range.intervals) w += hi - lo;
    return w;
}

double interval_width_containing(const ValidityRange& range, double x) {
    for (const auto& [lo, hi] : range.intervals) {
        if (x >= lo && x <= hi) return hi - lo;
    }
    return 0.0;
}

std::vector<std::pair<ScenarioDomain, metrics::FidelityScore>> fidelity_map(
    std::span<const SummarizedRegion> model,
    std::span<const SummarizedRegion> referent) {
    std::ostringstream mismatches;
    bool mismatched = false;
    if (model.size() != referent.size()) {
        std::ostringstream os;
        os << "fidelity map: region count mismatch (model has "
           << model.size() << ", referent has " << referent.size() << ")";
        throw std::invalid_argument(os.str());
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (!(model[i].domain == referent[i].domain)) {
            if (mismatched) mismatches << "; ";
            mismatches << "region " << i << ": model ["
                       << fmt(model[i].domain.lo) << ", "
                       << fmt(model[i].domain.hi) << "] res "
                       << fmt(model[i].domain.resolution) << " vs referent ["
                       << fmt(referent[i].domain.lo) << ", "
                       << fmt(referent[i].domain.hi) << "] res "
                       << fmt(referent[i].domain.resolution);
            mismatched = true;
        }
    }
    if (mismatched) {
        throw std::invalid_argument("fidelity map: domain mismatch: " +
                                    mismatches.str());
    }
    std::vector<std::pair<ScenarioDomain, metrics::FidelityScore>> out;
    out.reserve(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        model[i].domain.validate();
        out.emplace_back(
            model[i].domain,
            metrics::fidelity_score(model[i].summary, referent[i].summary));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.lo != b.first.lo) return a.first.lo < b.first.lo;
        return a.first.hi < b.first.hi;
    });
    return out;
}

}  // namespace fidelity::scenario
