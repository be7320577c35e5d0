#include "fidelity/gradeability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fidelity/rng.hpp"

namespace fidelity::gradeability {
namespace {

constexpr double kDegToRad = 0.017453292519943295;

double roughness_delta(std::uint64_t seed, double roughness_std) {
    if (roughness_std == 0.0) return 0.0;
    RandomStream rs(seed);
    return roughness_std * rs.standard_normal();
}

}  // namespace

void VehicleConfig::validate() const {
    if (!(weight_kn > 0.0)) {
        throw std::invalid_argument("vehicle: weight must be > 0");
    }
    if (!(contact_area_m2 > 0.0)) {
        throw std::invalid_argument("vehicle: contact area must be > 0");
    }
    if (!(rolling_resistance >= 0.0)) {
        throw std::invalid_argument(
            "vehicle: rolling resistance must be >= 0");
    }
    if (!(tire_efficiency > 0.0 && tire_efficiency <= 1.0)) {
        throw std::invalid_argument(
            "vehicle: tire efficiency must lie in (0, 1]");
    }
}

bool can_climb(const VehicleConfig& vehicle, const SoilParams& soil,
               double grade_pct, double roughness_std) {
    vehicle.validate();
    if (!(grade_pct >= 0.0)) {
        throw std::invalid_argument("can_climb: grade must be >= 0");
    }
    if (!(roughness_std >= 0.0)) {
        throw std::invalid_argument("can_climb: roughness std must be >= 0");
    }
    if (!(soil.cohesion_kpa >= 0.0)) {
        throw std::invalid_argument("soil: cohesion must be >= 0");
    }
    if (!(soil.friction_angle_deg >= 0.0 && soil.friction_angle_deg < 90.0)) {
        throw std::invalid_argument(
            "soil: friction angle must lie in [0, 90) degrees");
    }
    const double theta = std::atan(grade_pct / 100.0);
    const double mu =
        vehicle.tire_efficiency *
            (std::tan(soil.friction_angle_deg * kDegToRad) +
             soil.cohesion_kpa * vehicle.contact_area_m2 /
                 (vehicle.weight_kn * std::cos(theta))) +
        roughness_delta(soil.roughness_seed, roughness_std);
    return mu >= std::tan(theta) + vehicle.rolling_resistance;
}

GradeabilityResult search_critical(
    const std::function<bool(double)>& climbs_at) {
    const bool at_lo = climbs_at(kSearchLo);
    const bool at_hi = climbs_at(kSearchHi);
    GradeabilityResult out;
    if (at_hi) {
        if (!at_lo) {
            throw std::domain_error(
                "predicate not monotone: climbs at the upper bracket but "
                "not at the lower");
        }
        out.critical_angle_pct = kSearchHi;
        out.bracket = {kSearchHi, kSearchHi};
        out.censoring = Censoring::High;
        return out;
    }
    if (!at_lo) {
        out.critical_angle_pct = kSearchLo;
        out.bracket = {kSearchLo, kSearchLo};
        out.censoring = Censoring::Low;
        return out;
    }
    double lo = kSearchLo;
    double hi = kSearchHi;
    int iterations = 0;
    while (hi - lo > kBracketWidth) {
        const double mid = 0.5 * (lo + hi);
        if (climbs_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iterations;
    }
    out.critical_angle_pct = 0.5 * (lo + hi);
    out.iterations = iterations;
    out.bracket = {lo, hi};
    out.censoring = Censoring::None;
    return out;
}

GradeabilityResult critical_angle(const VehicleConfig& vehicle,
                                  const SoilParams& soil,
                                  double roughness_std) {
    return search_critical([&](double grade) {
        return can_climb(vehicle, soil, grade, roughness_std);
    });
}

MonteCarloResult monte_carlo_ca(const VehicleConfig& vehicle,
                                const SoilDistribution& soil, int runs,
                                std::uint64_t seed) {
    vehicle.validate();
    if (runs < 30) {
        throw std::invalid_argument(
            "monte carlo: at least 30 runs required");
    }
    if (!(soil.cohesion_std_kpa >= 0.0) || !(soil.friction_std_deg >= 0.0) ||
        !(soil.roughness_std >= 0.0)) {
        throw std::invalid_argument(
            "soil distribution: stds must be >= 0");
    }
    MonteCarloResult out;
    out.samples.reserve(static_cast<std::size_t>(runs));
    for (int i = 0; i < runs; ++i) {
        RandomStream sub =
            RandomStream::substream(seed, static_cast<std::uint64_t>(i));
        SoilParams draw;
        draw.cohesion_kpa = sub.truncated_normal(
            soil.cohesion_mean_kpa, soil.cohesion_std_kpa, 0.0,
            std::numeric_limits<double>::infinity());
        draw.friction_angle_deg = sub.truncated_normal(
            soil.friction_mean_deg, soil.friction_std_deg, 0.0, 45.0);
        draw.roughness_seed = sub.next_u64();
        const GradeabilityResult result =
            critical_angle(vehicle, draw, soil.roughness_std);
        out.samples.push_back(result.critical_angle_pct);
        if (result.censoring == Censoring::Low) ++out.censored_low;
        if (result.censoring == Censoring::High) ++out.censored_high;
    }
    out.summary = metrics::summarize(out.samples);
    out.degenerate =
        out.censored_low == runs || out.censored_high == runs;
    return out;
}

}  // namespace fidelity::gradeability
