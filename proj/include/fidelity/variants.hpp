#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace fidelity::variants {

// A 150%-style feature lattice over a coil-spring deflection model: the
// referent enables every feature; the 15 reduced variants switch subsets
// off.  Flag order (most to least significant in the variant index):
// temperature dependence, end-condition factor, buckling heuristic,
// buckling calculation.

struct VariantFlags {
    bool temperature_dependence = false;
    bool end_condition = false;
    bool buckling_heuristic = false;
    bool buckling_calculation = false;

    static VariantFlags from_index(int index);  // index in [0, 15]
    int index() const;
    int enabled_count() const;
    std::array<int, 4> as_array() const;
    std::string label() const;  // e.g. "[1,0,1,1]"

    bool operator==(const VariantFlags&) const = default;
};

inline constexpr int kVariantCount = 16;

inline VariantFlags referent_flags() {
    return VariantFlags{true, true, true, true};
}

struct CoilSpringSpec {
    double wire_diameter_mm = 8.0;
    double coil_diameter_mm = 64.0;  // mean coil diameter
    double active_coils = 10.0;
    double free_length_mm = 120.0;
    double shear_modulus_mpa = 79300.0;   // at the 20 C reference
    double temp_coefficient_per_c = 5e-4;  // linear derating per degree C
    double allowable_stress_mpa = 550.0;   // at the 20 C reference
    double end_condition_factor = 0.5;     // fixed-fixed support

    void validate() const;
};

enum class FailureMode { None, Break, BottomOut, Buckle };

const char* to_string(FailureMode mode);

struct FeatureCosts {
    double base = 1.0;
    double temperature = 0.5;
    double end_condition = 0.25;
    double heuristic = 0.25;
    double calculation = 1.0;

    double total(const VariantFlags& flags) const;
};

struct SpringResponse {
    double deformation_mm = 0.0;  // unclamped; saturation lives in the mode
    FailureMode failure = FailureMode::None;
    double cost = 0.0;
};

// Evaluates one variant at one (load, temperature) operating point.
// Failure priority: break, then bottom-out, then buckle.  With both
// buckling flags enabled, either check may raise the buckle verdict.
SpringResponse evaluate_variant(const CoilSpringSpec& spec,
                                const VariantFlags& flags, double load_n,
                                double temperature_c,
                                const FeatureCosts& costs = {});

struct DoePoint {
    double load_n = 0.0;
    double temperature_c = 20.0;
    double length_multiplier = 1.0;  // scales the free length
};

// Default desk-scale operating grid: loads {100,400,700,1100,1500} N x
// temperatures {20,45,70,95,120} C x free-length multipliers {1,2,3,4}.
std::vector<DoePoint> default_grid();

struct DoeTable {
    CoilSpringSpec spec;
    FeatureCosts costs;
    std::vector<DoePoint> points;
    // responses[point][variant index]; point-major, variant-minor.
    std::vector<std::array<SpringResponse, kVariantCount>> responses;
};

DoeTable doe_run(const CoilSpringSpec& spec, std::span<const DoePoint> points,
                 const FeatureCosts& costs = {});

// Largest |deformation| anywhere in the table (used for the default
// tolerance rule: epsilon = 1% of this value).
double max_abs_deformation(const DoeTable& table);

struct SelectionReport {
    double epsilon = 0.0;
    std::vector<int> chosen;  // variant index per point
    std::vector<std::array<bool, kVariantCount>> accepted;
    double chosen_cost_total = 0.0;
    double referent_cost_total = 0.0;
    double cost_ratio = 0.0;
};

// Per point, picks the cheapest variant whose deformation lies within
// epsilon of the referent's and whose failure mode matches.  Ties break on
// fewest enabled features, then lexicographic flag order.  The referent
// always qualifies, so selection is total.
SelectionReport select_cheapest_acceptable(const DoeTable& table,
                                           double epsilon);

}  // namespace fidelity::variants
