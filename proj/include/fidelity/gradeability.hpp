#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fidelity/metrics.hpp"

namespace fidelity::gradeability {

// Desk-scale soft-soil climbing model.  A vehicle climbs a grade when the
// available traction coefficient
//   mu = eta * (tan(phi) + c * A / (W * cos(theta))) + roughness
// meets the demand tan(theta) + f_r, with theta = atan(grade/100).

struct VehicleConfig {
    double weight_kn = 50.0;
    double contact_area_m2 = 0.4;
    double rolling_resistance = 0.02;
    double tire_efficiency = 1.0;  // eta in (0, 1]

    void validate() const;
};

struct SoilParams {
    double cohesion_kpa = 10.0;
    double friction_angle_deg = 25.0;
    // Seed for the per-draw surface-roughness perturbation on mu.
    std::uint64_t roughness_seed = 0;
};

// Standard deviation of the additive zero-mean roughness perturbation.
inline constexpr double kDefaultRoughnessStd = 0.01;

// True when the vehicle climbs the grade (percent slope).  Deterministic:
// the roughness perturbation is a pure function of soil.roughness_seed.
bool can_climb(const VehicleConfig& vehicle, const SoilParams& soil,
               double grade_pct, double roughness_std = kDefaultRoughnessStd);

enum class Censoring { None, Low, High };

struct GradeabilityResult {
    double critical_angle_pct = 0.0;  // midpoint of the final bracket
    int iterations = 0;               // bisection steps performed (<= 8)
    std::pair<double, double> bracket = {0.0, 0.0};
    Censoring censoring = Censoring::None;
};

// Protocol search range and convergence width, in percent grade.
inline constexpr double kSearchLo = 30.0;
inline constexpr double kSearchHi = 70.0;
inline constexpr double kBracketWidth = 0.25;

// Core search protocol over an arbitrary monotone climb predicate: bisection
// on [30, 70] down to a 0.25-wide bracket, censoring at either end and
// rejecting predicates that climb at 70 but not at 30.
GradeabilityResult search_critical(
    const std::function<bool(double)>& climbs_at);

// Bisection search for the steepest climbable grade within [30, 70].
// Climbing at 70 reports 70/censored-high; failing at 30 reports
// 30/censored-low.  Climbing at 70 while failing at 30 raises
// std::domain_error("predicate not monotone ...").
GradeabilityResult critical_angle(const VehicleConfig& vehicle,
                                  const SoilParams& soil,
                                  double roughness_std = kDefaultRoughnessStd);

// Soil variability for Monte Carlo studies.  Defaults are declared toolkit
// conventions: cohesion ~ Normal(10, 1.5) kPa truncated at 0, friction angle
// ~ Normal(25, 1.5) degrees truncated to [0, 45], roughness std 0.01.
struct SoilDistribution {
    double cohesion_mean_kpa = 10.0;
    double cohesion_std_kpa = 1.5;
    double friction_mean_deg = 25.0;
    double friction_std_deg = 1.5;
    double roughness_std = kDefaultRoughnessStd;
};

struct MonteCarloResult {
    std::vector<double> samples;  // critical angle per run, run order
    metrics::SampleSummary summary;
    int censored_low = 0;
    int censored_high = 0;
    // True when every run was censored on the same side.
    bool degenerate = false;
};

// Monte Carlo critical-angle study.  Run i draws its soil from the
// sub-stream derived from (seed, i), so results do not depend on execution
// order.  Requires runs >= 30.
MonteCarloResult monte_carlo_ca(const VehicleConfig& vehicle,
                                const SoilDistribution& soil, int runs,
                                std::uint64_t seed);

}  // namespace fidelity::gradeability
