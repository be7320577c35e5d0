#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "fidelity/metrics.hpp"

namespace fidelity::scenario {

using RealFn = std::function<double(double)>;

// Closed scenario interval scanned at a fixed resolution.
struct ScenarioDomain {
    double lo = 0.0;
    double hi = 0.0;
    double resolution = 0.0;

    // Throws std::invalid_argument unless lo < hi, resolution > 0, and the
    // grid has at least three points.
    void validate() const;

    bool operator==(const ScenarioDomain&) const = default;
};

// Grid points of the domain: lo, lo+res, ...; hi is always the last point.
std::vector<double> grid_points(const ScenarioDomain& domain);

struct ResponseTrace {
    std::vector<double> inputs;
    std::vector<double> outputs;
};

// Evaluates fn over the domain grid.  Throws std::domain_error naming the
// offending input if fn produces a non-finite value.
ResponseTrace trace(const RealFn& fn, const ScenarioDomain& domain);

struct ValidityCriterion {
    enum class Kind { RelativeError, AbsoluteError };
    Kind kind = Kind::RelativeError;
    double threshold = 0.0;  // must be > 0
};

// Union of maximal sub-intervals where the model satisfies the criterion
// against the referent.  Interval endpoints are refined by bisection to
// resolution/100; each reported endpoint satisfies the criterion while the
// abandoned bracket side violates it.
struct ValidityRange {
    std::vector<std::pair<double, double>> intervals;  // ascending, disjoint
    ValidityCriterion criterion;
};

ValidityRange validity_range(const RealFn& model, const RealFn& referent,
                             const ScenarioDomain& domain,
                             const ValidityCriterion& criterion);

// Total length of all valid intervals.
double total_width(const ValidityRange& range);

// Width of the valid interval containing x, or 0 when x is in no interval.
double interval_width_containing(const ValidityRange& range, double x);

// Scenario region with a precomputed output summary.
struct SummarizedRegion {
    ScenarioDomain domain;
    metrics::SampleSummary summary;
};

// Per-region fidelity of the model against the referent.  Model and referent
// region lists must have identical domains pairwise; mismatches raise
// std::invalid_argument listing every offending region.  Output is sorted by
// region lower bound.
std::vector<std::pair<ScenarioDomain, metrics::FidelityScore>> fidelity_map(
    std::span<const SummarizedRegion> model,
    std::span<const SummarizedRegion> referent);

}  // namespace fidelity::scenario
