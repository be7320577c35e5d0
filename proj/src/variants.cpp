#include "fidelity/variants.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace fidelity::variants {
namespace {

// Buckling stability constants for steel (E/G = 2.6): the critical reduced
// deflection is C1 * (1 - sqrt(1 - C2 / lambda_eff^2)), with absolute
// stability below lambda_eff = sqrt(C2).
constexpr double kBucklingC1 = 0.8125;
constexpr double kBucklingC2 = 6.868;

double derating(const CoilSpringSpec& spec, double temperature_c) {
    const double factor =
        1.0 - spec.temp_coefficient_per_c * (temperature_c - 20.0);
    if (!(factor > 0.0)) {
        throw std::domain_error(
            "spring: temperature derating drives the modulus non-positive");
    }
    return factor;
}

}  // namespace

VariantFlags VariantFlags::from_index(int index) {
    if (index < 0 || index >= kVariantCount) {
        throw std::invalid_argument("variant index must lie in [0, 15]");
    }
    VariantFlags f;
    f.temperature_dependence = (index & 8) != 0;
    f.end_condition = (index & 4) != 0;
    f.buckling_heuristic = (index & 2) != 0;
    f.buckling_calculation = (index & 1) != 0;
    return f;
}

int VariantFlags::index() const {
    return (temperature_dependence ? 8 : 0) + (end_condition ? 4 : 0) +
           (buckling_heuristic ? 2 : 0) + (buckling_calculation ? 1 : 0);
}

int VariantFlags::enabled_count() const {
    return (temperature_dependence ? 1 : 0) + (end_condition ? 1 : 0) +
           (buckling_heuristic ? 1 : 0) + (buckling_calculation ? 1 : 0);
}

std::array<int, 4> VariantFlags::as_array() const {
    return {temperature_dependence ? 1 : 0, end_condition ? 1 : 0,
            buckling_heuristic ? 1 : 0, buckling_calculation ? 1 : 0};
}

std::string VariantFlags::label() const {
    const auto a = as_array();
    std::string s = "[";
    for (int i = 0; i < 4; ++i) {
        s += static_cast<char>('0' + a[static_cast<std::size_t>(i)]);
        s += i < 3 ? "," : "]";
    }
    return s;
}

void CoilSpringSpec::validate() const {
    if (!(wire_diameter_mm > 0.0)) {
        throw std::invalid_argument("spring: wire diameter must be > 0");
    }
    if (!(coil_diameter_mm > wire_diameter_mm)) {
        throw std::invalid_argument(
            "spring: coil diameter must exceed the wire diameter");
    }
    if (!(active_coils >= 1.0)) {
        throw std::invalid_argument("spring: need at least one active coil");
    }
    if (!(free_length_mm > active_coils * wire_diameter_mm)) {
        throw std::invalid_argument(
            "spring: free length must exceed the solid length");
    }
    if (!(shear_modulus_mpa > 0.0)) {
        throw std::invalid_argument("spring: shear modulus must be > 0");
    }
    if (!(temp_coefficient_per_c >= 0.0)) {
        throw std::invalid_argument(
            "spring: temperature coefficient must be >= 0");
    }
    if (!(allowable_stress_mpa > 0.0)) {
        throw std::invalid_argument(
            "spring: allowable stress must be > 0");
    }
    if (!(end_condition_factor > 0.0 && end_condition_factor <= 1.0)) {
        throw std::invalid_argument(
            "spring: end-condition factor must lie in (0, 1]");
    }
}

const char* to_string(FailureMode mode) {
    switch (mode) {
        case FailureMode::None: return "none";
        case FailureMode::Break: return "break";
        case FailureMode::BottomOut: return "bottom-out";
        case FailureMode::Buckle: return "buckle";
    }
    return "unknown";
}

double FeatureCosts::total(const VariantFlags& flags) const {
    return base + (flags.temperature_dependence ? temperature : 0.0) +
           (flags.end_condition ? end_condition : 0.0) +
           (flags.buckling_heuristic ? heuristic : 0.0) +
           (flags.buckling_calculation ? calculation : 0.0);
}

SpringResponse evaluate_variant(const CoilSpringSpec& spec,
                                const VariantFlags& flags, double load_n,
                                double temperature_c,
                                const FeatureCosts& costs) {
    spec.validate();
    if (!(load_n >= 0.0)) {
        throw std::invalid_argument("spring: load must be >= 0");
    }

    const double d = spec.wire_diameter_mm;
    const double D = spec.coil_diameter_mm;
    const double factor =
        flags.temperature_dependence ? derating(spec, temperature_c) : 1.0;
    const double g_eff = spec.shear_modulus_mpa * factor;
    const double tau_allow = spec.allowable_stress_mpa * factor;

    const double k = g_eff * d * d * d * d /
                     (8.0 * D * D * D * spec.active_coils);
    const double deformation = load_n / k;

    const double c = D / d;
    const double wahl = (4.0 * c - 1.0) / (4.0 * c - 4.0) + 0.615 / c;
    const double stress =
        8.0 * load_n * D * wahl / (std::numbers::pi * d * d * d);

    const double travel = spec.free_length_mm - spec.active_coils * d;

    SpringResponse out;
    out.deformation_mm = deformation;
    out.cost = costs.total(flags);

    if (stress > tau_allow) {
        out.failure = FailureMode::Break;
        return out;
    }
    if (deformation >= travel) {
        out.failure = FailureMode::BottomOut;
        return out;
    }

    const double slenderness = spec.free_length_mm / D;
    const double nu_eff =
        flags.end_condition ? spec.end_condition_factor : 1.0;
    bool buckles = false;
    if (flags.buckling_calculation) {
        const double lambda_eff = nu_eff * slenderness;
        if (lambda_eff * lambda_eff > kBucklingC2) {
            const double critical =
                kBucklingC1 *
                (1.0 - std::sqrt(1.0 - kBucklingC2 / (lambda_eff * lambda_eff)));
            if (deformation / spec.free_length_mm > critical) buckles = true;
        }
    }
    if (!buckles && flags.buckling_heuristic) {
        if (slenderness > 2.63 / nu_eff &&
            deformation / spec.free_length_mm > 0.25) {
            buckles = true;
        }
    }
    if (buckles) out.failure = FailureMode::Buckle;
    return out;
}

std::vector<DoePoint> default_grid() {
    const double loads[] = {100.0, 400.0, 700.0, 1100.0, 1500.0};
    const double temps[] = {20.0, 45.0, 70.0, 95.0, 120.0};
    const double mults[] = {1.0, 2.0, 3.0, 4.0};
    std::vector<DoePoint> points;
    points.reserve(100);
    for (const double f : loads) {
        for (const double t : temps) {
            for (const double m : mults) {
                points.push_back({f, t, m});
            }
        }
    }
    return points;
}

DoeTable doe_run(const CoilSpringSpec& spec, std::span<const DoePoint> points,
                 const FeatureCosts& costs) {
    spec.validate();
    if (points.empty()) {
        throw std::invalid_argument("doe: need at least one grid point");
    }
    DoeTable table;
    table.spec = spec;
    table.costs = costs;
    table.points.assign(points.begin(), points.end());
    table.responses.reserve(points.size());
    for (const DoePoint& p : points) {
        if (!(p.length_multiplier > 0.0)) {
            throw std::invalid_argument(
                "doe: length multiplier must be > 0");
        }
        CoilSpringSpec scaled = spec;
        scaled.free_length_mm *= p.length_multiplier;
        scaled.validate();
        std::array<SpringResponse, kVariantCount> row;
        for (int v = 0; v < kVariantCount; ++v) {
            row[static_cast<std::size_t>(v)] = evaluate_variant(
                scaled, VariantFlags::from_index(v), p.load_n,
                p.temperature_c, costs);
        }
        table.responses.push_back(row);
    }
    return table;
}

double max_abs_deformation(const DoeTable& table) {
    double m = 0.0;
    for (const auto& row : table.responses) {
        for (const auto& r : row) {
            m = std::fmax(m, std::fabs(r.deformation_mm));
        }
    }
    return m;
}

SelectionReport select_cheapest_acceptable(const DoeTable& table,
                                           double epsilon) {
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("selection: epsilon must be >= 0");
    }
    if (table.responses.size() != table.points.size()) {
        throw std::invalid_argument("selection: malformed table");
    }
    SelectionReport report;
    report.epsilon = epsilon;
    report.chosen.reserve(table.points.size());
    report.accepted.reserve(table.points.size());
    const int referent = referent_flags().index();
    for (const auto& row : table.responses) {
        const SpringResponse& ref = row[static_cast<std::size_t>(referent)];
        std::array<bool, kVariantCount> accepted{};
        int best = referent;
        for (int v = 0; v < kVariantCount; ++v) {
            const SpringResponse& r = row[static_cast<std::size_t>(v)];
            const bool ok =
                std::fabs(r.deformation_mm - ref.deformation_mm) <= epsilon &&
                r.failure == ref.failure;
            accepted[static_cast<std::size_t>(v)] = ok;
            if (!ok) continue;
            const SpringResponse& b = row[static_cast<std::size_t>(best)];
            const auto rank = [&](int idx, const SpringResponse& resp) {
                return std::tuple(resp.cost,
                                  VariantFlags::from_index(idx).enabled_count(),
                                  idx);
            };
            if (rank(v, r) < rank(best, b)) best = v;
        }
        report.accepted.push_back(accepted);
        report.chosen.push_back(best);
        report.chosen_cost_total += row[static_cast<std::size_t>(best)].cost;
        report.referent_cost_total += ref.cost;
    }
    report.cost_ratio = report.chosen_cost_total / report.referent_cost_total;
    return report;
}

}  // namespace fidelity::variants
