#include "fidelity/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fidelity::report {
namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::optional<double> parse_double(const std::string& raw) {
    const std::string s = trimmed(raw);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

// Rejects unknown keys and reports missing required keys, all in one
// message, so config errors name every offending key at once.
void check_object(const json& j, const std::string& context,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
    if (!j.is_object()) {
        throw std::invalid_argument(context + ": expected a JSON object");
    }
    std::vector<std::string> missing;
    for (const char* key : required) {
        if (!j.contains(key)) missing.emplace_back(key);
    }
    std::vector<std::string> unknown;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        const auto in = [&key](std::initializer_list<const char*> list) {
            return std::any_of(list.begin(), list.end(), [&key](const char* k) {
                return key == k;
            });
        };
        if (!in(required) && !in(optional)) unknown.push_back(key);
    }
    if (missing.empty() && unknown.empty()) return;
    std::ostringstream os;
    os << context << ":";
    if (!missing.empty()) {
        os << " missing required key(s):";
        for (const auto& k : missing) os << " " << k;
        if (!unknown.empty()) os << ";";
    }
    if (!unknown.empty()) {
        os << " unknown key(s):";
        for (const auto& k : unknown) os << " " << k;
    }
    throw std::invalid_argument(os.str());
}

void check_schema(const json& j, const std::string& context,
                  const std::string& expected) {
    if (!j.contains("schema") || !j.at("schema").is_string()) {
        throw std::invalid_argument(context +
                                    ": missing required key(s): schema");
    }
    const auto got = j.at("schema").get<std::string>();
    if (got != expected) {
        throw std::invalid_argument(context + ": schema must be '" +
                                    expected + "', got '" + got + "'");
    }
}

json open_json(const std::string& path, const std::string& context) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(context + ": invalid JSON in " + path +
                                    ": " + e.what());
    }
}

double number_at(const json& j, const char* key, const std::string& context) {
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument(context + ": key '" + key +
                                    "' must be a number");
    }
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback,
                 const std::string& context) {
    if (!j.contains(key)) return fallback;
    return number_at(j, key, context);
}

std::uint64_t count_or(const json& j, const char* key, std::uint64_t fallback,
                       const std::string& context) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        throw std::invalid_argument(context + ": key '" + key +
                                    "' must be a non-negative integer");
    }
    const auto s = v.get<std::int64_t>();
    if (s < 0) {
        throw std::invalid_argument(context + ": key '" + key +
                                    "' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(s);
}

metrics::SampleSummary summary_from(const json& j,
                                    const std::string& context) {
    metrics::SampleSummary s;
    s.mean = number_at(j, "mean", context);
    s.std = number_at(j, "std", context);
    s.n = count_or(j, "n", 0, context);
    return s;
}

}  // namespace

FidelityReport make_report(const std::string& referent_name,
                           const metrics::SampleSummary& referent,
                           std::span<const metrics::ModelRecord> models,
                           std::span<const std::uint64_t> seeds) {
    FidelityReport report;
    report.referent_name = referent_name;
    report.referent_mean = referent.mean;
    report.referent_std = referent.std;
    report.referent_n = referent.n;
    report.seeds.assign(seeds.begin(), seeds.end());
    report.rows.reserve(models.size());
    for (const auto& m : models) {
        const metrics::FidelityScore score =
            metrics::fidelity_score(m.summary, referent);
        ReportRow row;
        row.model = m.name;
        row.f = score.f;
        row.f_a = score.f_a;
        row.f_v = score.f_v;
        row.percent_error = score.percent_error;
        row.mean = m.summary.mean;
        row.std = m.summary.std;
        row.n = m.summary.n;
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(),
              [](const ReportRow& a, const ReportRow& b) {
                  if (a.f != b.f) return a.f > b.f;
                  return a.model < b.model;
              });
    return report;
}

json report_to_json(const FidelityReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {
            {"model", r.model}, {"f", r.f},       {"f_a", r.f_a},
            {"f_v", r.f_v},     {"mean", r.mean}, {"std", r.std},
            {"n", r.n},
        };
        row["percent_error"] =
            r.percent_error ? json(*r.percent_error) : json(nullptr);
        rows.push_back(std::move(row));
    }
    return json{
        {"schema", "fidelity-report-v1"},
        {"tool_version", report.tool_version},
        {"referent",
         {{"name", report.referent_name},
          {"mean", report.referent_mean},
          {"std", report.referent_std},
          {"n", report.referent_n}}},
        {"seeds", report.seeds},
        {"rows", std::move(rows)},
    };
}

FidelityReport report_from_json(const json& j) {
    const std::string context = "fidelity report";
    check_schema(j, context, "fidelity-report-v1");
    check_object(j, context, {"schema", "tool_version", "referent", "seeds",
                              "rows"}, {});
    FidelityReport report;
    report.tool_version = j.at("tool_version").get<std::string>();
    const json& ref = j.at("referent");
    check_object(ref, context + ".referent", {"name", "mean", "std", "n"},
                 {});
    report.referent_name = ref.at("name").get<std::string>();
    report.referent_mean = number_at(ref, "mean", context);
    report.referent_std = number_at(ref, "std", context);
    report.referent_n = count_or(ref, "n", 0, context);
    report.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    for (const json& row : j.at("rows")) {
        check_object(row, context + ".rows[]",
                     {"model", "f", "f_a", "f_v", "percent_error", "mean",
                      "std", "n"},
                     {});
        ReportRow r;
        r.model = row.at("model").get<std::string>();
        r.f = number_at(row, "f", context);
        r.f_a = number_at(row, "f_a", context);
        r.f_v = number_at(row, "f_v", context);
        if (!row.at("percent_error").is_null()) {
            r.percent_error = number_at(row, "percent_error", context);
        }
        r.mean = number_at(row, "mean", context);
        r.std = number_at(row, "std", context);
        r.n = count_or(row, "n", 0, context);
        report.rows.push_back(std::move(r));
    }
    return report;
}

std::string format_double(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return buf;
}

std::string report_to_table(const FidelityReport& report, int precision) {
    const std::vector<std::string> headers = {"Model", "f",    "f_a", "f_v",
                                              "Percent Error", "Mean", "Std"};
    std::vector<std::vector<std::string>> cells;
    cells.reserve(report.rows.size());
    for (const auto& r : report.rows) {
        cells.push_back({
            r.model,
            format_double(r.f, precision),
            format_double(r.f_a, precision),
            format_double(r.f_v, precision),
            r.percent_error ? format_double(*r.percent_error, precision)
                            : std::string("n/a"),
            format_double(r.mean, precision),
            format_double(r.std, precision),
        });
    }
    std::vector<std::size_t> widths;
    widths.reserve(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) {
        std::size_t w = headers[c].size();
        for (const auto& row : cells) w = std::max(w, row[c].size());
        widths.push_back(w);
    }
    std::ostringstream os;
    const auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) os << "  ";
            // Left-align the model column, right-align the numbers.
            if (c == 0) {
                os << row[c]
                   << std::string(widths[c] - row[c].size(), ' ');
            } else {
                os << std::string(widths[c] - row[c].size(), ' ')
                   << row[c];
            }
        }
        os << "\n";
    };
    emit_row(headers);
    std::vector<std::string> rule;
    rule.reserve(widths.size());
    for (const std::size_t w : widths) rule.emplace_back(w, '-');
    emit_row(rule);
    for (const auto& row : cells) emit_row(row);
    return os.str();
}

std::vector<double> load_samples(const std::string& path) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        const json j = open_json(path, "sample file");
        if (!j.is_array()) {
            throw std::invalid_argument(
                "sample file: expected a JSON array of numbers in " + path);
        }
        std::vector<double> out;
        out.reserve(j.size());
        for (const json& v : j) {
            if (!v.is_number()) {
                throw std::invalid_argument(
                    "sample file: non-numeric entry in " + path);
            }
            out.push_back(v.get<double>());
        }
        return out;
    }

    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    std::vector<double> out;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string body = trimmed(line);
        if (body.empty()) continue;
        if (body.find(',') != std::string::npos) {
            throw std::invalid_argument(
                "sample file: expected a single column at " + path + ":" +
                std::to_string(lineno));
        }
        if (!saw_header) {
            if (parse_double(body)) {
                throw std::invalid_argument(
                    "sample file: missing header line (e.g. 'value') in " +
                    path);
            }
            saw_header = true;
            continue;
        }
        const auto v = parse_double(body);
        if (!v) {
            throw std::invalid_argument("sample file: malformed number at " +
                                        path + ":" + std::to_string(lineno));
        }
        out.push_back(*v);
    }
    if (!saw_header) {
        throw std::invalid_argument("sample file: empty file: " + path);
    }
    return out;
}

void write_samples_csv(const std::string& path, const std::string& header,
                       std::span<const double> samples) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write file: " + path);
    }
    out << header << "\n";
    char buf[64];
    for (const double v : samples) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << "\n";
    }
    if (!out) {
        throw std::invalid_argument("cannot write file: " + path);
    }
}

Registry load_registry(const std::string& path) {
    const std::string context = "registry";
    const json j = open_json(path, context);
    check_schema(j, context, "fidelity-registry-v1");
    check_object(j, context, {"schema", "referent", "models"}, {});
    const json& ref = j.at("referent");
    check_object(ref, context + ".referent", {"mean", "std"}, {"name", "n"});
    Registry reg;
    reg.referent_name = ref.contains("name")
                            ? ref.at("name").get<std::string>()
                            : std::string("referent");
    reg.referent = summary_from(ref, context + ".referent");
    if (!j.at("models").is_array()) {
        throw std::invalid_argument(context + ": 'models' must be an array");
    }
    for (const json& m : j.at("models")) {
        check_object(m, context + ".models[]", {"name", "mean", "std"},
                     {"n", "cost", "tags"});
        metrics::ModelRecord rec;
        rec.name = m.at("name").get<std::string>();
        rec.summary = summary_from(m, context + ".models[]");
        if (m.contains("cost")) {
            rec.cost = number_at(m, "cost", context + ".models[]");
        }
        if (m.contains("tags")) {
            for (const json& t : m.at("tags")) {
                rec.information_tags.insert(t.get<std::string>());
            }
        }
        reg.models.push_back(std::move(rec));
    }
    return reg;
}

std::vector<MapRegion> load_map_regions(const std::string& path) {
    const std::string context = "map regions";
    const json j = open_json(path, context);
    check_schema(j, context, "fidelity-map-regions-v1");
    check_object(j, context, {"schema", "regions"}, {});
    if (!j.at("regions").is_array()) {
        throw std::invalid_argument(context + ": 'regions' must be an array");
    }
    std::vector<MapRegion> out;
    for (const json& r : j.at("regions")) {
        check_object(r, context + ".regions[]",
                     {"domain", "model", "referent"}, {});
        const json& d = r.at("domain");
        check_object(d, context + ".regions[].domain",
                     {"lo", "hi", "resolution"}, {});
        MapRegion region;
        region.lo = number_at(d, "lo", context);
        region.hi = number_at(d, "hi", context);
        region.resolution = number_at(d, "resolution", context);
        check_object(r.at("model"), context + ".regions[].model",
                     {"mean", "std"}, {"n"});
        check_object(r.at("referent"), context + ".regions[].referent",
                     {"mean", "std"}, {"n"});
        region.model = summary_from(r.at("model"), context);
        region.referent = summary_from(r.at("referent"), context);
        out.push_back(region);
    }
    return out;
}

GradeabilityConfig load_gradeability_config(const std::string& path) {
    const std::string context = "gradeability config";
    const json j = open_json(path, context);
    check_schema(j, context, "fidelity-gradeability-config-v1");
    check_object(j, context, {"schema"}, {"vehicle", "soil"});
    GradeabilityConfig cfg;
    if (j.contains("vehicle")) {
        const json& v = j.at("vehicle");
        check_object(v, context + ".vehicle", {},
                     {"weight_kn", "contact_area_m2", "rolling_resistance",
                      "tire_efficiency"});
        cfg.vehicle.weight_kn =
            number_or(v, "weight_kn", cfg.vehicle.weight_kn, context);
        cfg.vehicle.contact_area_m2 = number_or(
            v, "contact_area_m2", cfg.vehicle.contact_area_m2, context);
        cfg.vehicle.rolling_resistance = number_or(
            v, "rolling_resistance", cfg.vehicle.rolling_resistance, context);
        cfg.vehicle.tire_efficiency = number_or(
            v, "tire_efficiency", cfg.vehicle.tire_efficiency, context);
    }
    if (j.contains("soil")) {
        const json& s = j.at("soil");
        check_object(s, context + ".soil", {},
                     {"cohesion_mean_kpa", "cohesion_std_kpa",
                      "friction_mean_deg", "friction_std_deg",
                      "roughness_std"});
        cfg.soil.cohesion_mean_kpa = number_or(
            s, "cohesion_mean_kpa", cfg.soil.cohesion_mean_kpa, context);
        cfg.soil.cohesion_std_kpa = number_or(
            s, "cohesion_std_kpa", cfg.soil.cohesion_std_kpa, context);
        cfg.soil.friction_mean_deg = number_or(
            s, "friction_mean_deg", cfg.soil.friction_mean_deg, context);
        cfg.soil.friction_std_deg = number_or(
            s, "friction_std_deg", cfg.soil.friction_std_deg, context);
        cfg.soil.roughness_std =
            number_or(s, "roughness_std", cfg.soil.roughness_std, context);
    }
    return cfg;
}

DoeConfig load_doe_config(const std::string& path) {
    const std::string context = "variants doe config";
    const json j = open_json(path, context);
    check_schema(j, context, "fidelity-variants-doe-v1");
    check_object(j, context, {"schema"}, {"spring", "costs", "grid"});
    DoeConfig cfg;
    if (j.contains("spring")) {
        const json& s = j.at("spring");
        check_object(s, context + ".spring", {},
                     {"wire_diameter_mm", "coil_diameter_mm", "active_coils",
                      "free_length_mm", "shear_modulus_mpa",
                      "temp_coefficient_per_c", "allowable_stress_mpa",
                      "end_condition_factor"});
        auto& sp = cfg.spring;
        sp.wire_diameter_mm =
            number_or(s, "wire_diameter_mm", sp.wire_diameter_mm, context);
        sp.coil_diameter_mm =
            number_or(s, "coil_diameter_mm", sp.coil_diameter_mm, context);
        sp.active_coils =
            number_or(s, "active_coils", sp.active_coils, context);
        sp.free_length_mm =
            number_or(s, "free_length_mm", sp.free_length_mm, context);
        sp.shear_modulus_mpa =
            number_or(s, "shear_modulus_mpa", sp.shear_modulus_mpa, context);
        sp.temp_coefficient_per_c = number_or(
            s, "temp_coefficient_per_c", sp.temp_coefficient_per_c, context);
        sp.allowable_stress_mpa = number_or(
            s, "allowable_stress_mpa", sp.allowable_stress_mpa, context);
        sp.end_condition_factor = number_or(
            s, "end_condition_factor", sp.end_condition_factor, context);
    }
    if (j.contains("costs")) {
        const json& c = j.at("costs");
        check_object(c, context + ".costs", {},
                     {"base", "temperature", "end_condition", "heuristic",
                      "calculation"});
        cfg.costs.base = number_or(c, "base", cfg.costs.base, context);
        cfg.costs.temperature =
            number_or(c, "temperature", cfg.costs.temperature, context);
        cfg.costs.end_condition =
            number_or(c, "end_condition", cfg.costs.end_condition, context);
        cfg.costs.heuristic =
            number_or(c, "heuristic", cfg.costs.heuristic, context);
        cfg.costs.calculation =
            number_or(c, "calculation", cfg.costs.calculation, context);
    }
    std::vector<double> loads = {100.0, 400.0, 700.0, 1100.0, 1500.0};
    std::vector<double> temps = {20.0, 45.0, 70.0, 95.0, 120.0};
    std::vector<double> mults = {1.0, 2.0, 3.0, 4.0};
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_object(g, context + ".grid", {},
                     {"loads_n", "temperatures_c", "length_multipliers"});
        const auto axis = [&](const char* key, std::vector<double>& target) {
            if (!g.contains(key)) return;
            const json& a = g.at(key);
            if (!a.is_array() || a.empty()) {
                throw std::invalid_argument(context + ": grid key '" + key +
                                            "' must be a non-empty array");
            }
            target.clear();
            for (const json& v : a) {
                if (!v.is_number()) {
                    throw std::invalid_argument(context + ": grid key '" +
                                                key +
                                                "' must contain numbers");
                }
                target.push_back(v.get<double>());
            }
        };
        axis("loads_n", loads);
        axis("temperatures_c", temps);
        axis("length_multipliers", mults);
    }
    for (const double f : loads) {
        for (const double t : temps) {
            for (const double m : mults) {
                cfg.points.push_back({f, t, m});
            }
        }
    }
    return cfg;
}

}  // namespace fidelity::report
