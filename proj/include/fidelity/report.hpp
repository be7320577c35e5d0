#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fidelity/gradeability.hpp"
#include "fidelity/metrics.hpp"
#include "fidelity/variants.hpp"

namespace fidelity::report {

inline constexpr const char* kToolVersion = "0.1.0";

struct ReportRow {
    std::string model;
    double f = 0.0;
    double f_a = 0.0;
    double f_v = 0.0;
    std::optional<double> percent_error;
    double mean = 0.0;
    double std = 0.0;
    std::uint64_t n = 0;  // 0 when the summary was supplied as bare stats

    bool operator==(const ReportRow&) const = default;
};

struct FidelityReport {
    std::string tool_version = kToolVersion;
    std::string referent_name;
    double referent_mean = 0.0;
    double referent_std = 0.0;
    std::uint64_t referent_n = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<ReportRow> rows;  // descending f; ties by name

    bool operator==(const FidelityReport&) const = default;
};

// Builds a report: scores each model against the referent and sorts rows by
// descending f (ties by name).
FidelityReport make_report(const std::string& referent_name,
                           const metrics::SampleSummary& referent,
                           std::span<const metrics::ModelRecord> models,
                           std::span<const std::uint64_t> seeds = {});

nlohmann::json report_to_json(const FidelityReport& report);
FidelityReport report_from_json(const nlohmann::json& j);

// Aligned text table with the seven standard columns (Model, f, f_a, f_v,
// Percent Error, Mean, Std).  precision = significant digits.
std::string report_to_table(const FidelityReport& report, int precision = 6);

// One floating-point value at the given number of significant digits.
std::string format_double(double value, int precision);

// --- sample and config files ------------------------------------------------

// Loads scalar samples from a .json array file or a single-column CSV whose
// first line is a (non-numeric) header such as "value".
std::vector<double> load_samples(const std::string& path);

// Writes samples as a single-column CSV with the given header, at full
// round-trip precision.
void write_samples_csv(const std::string& path, const std::string& header,
                       std::span<const double> samples);

struct Registry {
    std::string referent_name;
    metrics::SampleSummary referent;
    std::vector<metrics::ModelRecord> models;
};

// fidelity-registry-v1 JSON document.
Registry load_registry(const std::string& path);

struct MapRegion {
    double lo = 0.0;
    double hi = 0.0;
    double resolution = 0.0;
    metrics::SampleSummary model;
    metrics::SampleSummary referent;
};

// fidelity-map-regions-v1 JSON document.
std::vector<MapRegion> load_map_regions(const std::string& path);

struct GradeabilityConfig {
    gradeability::VehicleConfig vehicle;
    gradeability::SoilDistribution soil;
};

// fidelity-gradeability-config-v1 JSON document.
GradeabilityConfig load_gradeability_config(const std::string& path);

struct DoeConfig {
    variants::CoilSpringSpec spring;
    variants::FeatureCosts costs;
    std::vector<variants::DoePoint> points;
};

// fidelity-variants-doe-v1 JSON document.
DoeConfig load_doe_config(const std::string& path);

}  // namespace fidelity::report
