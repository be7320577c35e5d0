#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fidelity/gradeability.hpp"
#include "fidelity/kernels.hpp"
#include "fidelity/metrics.hpp"
#include "fidelity/report.hpp"
#include "fidelity/rng.hpp"
#include "fidelity/scenario.hpp"
#include "fidelity/surrogate.hpp"
#include "fidelity/variants.hpp"

namespace {

using nlohmann::json;
namespace fid = fidelity;

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// shared helpers

struct Stats {
    std::string name;
    double mean = 0.0;
    double std = 0.0;
};

// Parses "mean,std" or "name:mean,std".
std::optional<Stats> parse_stats(const std::string& arg,
                                 const std::string& default_name) {
    Stats out;
    out.name = default_name;
    std::string body = arg;
    const auto colon = arg.find(':');
    if (colon != std::string::npos) {
        out.name = arg.substr(0, colon);
        body = arg.substr(colon + 1);
        if (out.name.empty()) return std::nullopt;
    }
    const auto comma = body.find(',');
    if (comma == std::string::npos) return std::nullopt;
    const auto parse = [](const std::string& s, double& v) {
        char* end = nullptr;
        v = std::strtod(s.c_str(), &end);
        return end == s.c_str() + s.size() && !s.empty();
    };
    if (!parse(body.substr(0, comma), out.mean)) return std::nullopt;
    if (!parse(body.substr(comma + 1), out.std)) return std::nullopt;
    return out;
}

fid::metrics::ModelRecord model_from_arg(const std::string& arg,
                                         bool population) {
    fid::metrics::ModelRecord rec;
    if (std::filesystem::exists(arg)) {
        const std::vector<double> samples = fid::report::load_samples(arg);
        rec.name = std::filesystem::path(arg).stem().string();
        rec.summary = fid::metrics::summarize(samples, !population);
        return rec;
    }
    const auto stats = parse_stats(arg, "");
    if (!stats || stats->name.empty()) {
        throw std::invalid_argument(
            "model argument is neither a readable file nor name:mean,std "
            "shorthand: " + arg);
    }
    rec.name = stats->name;
    rec.summary.mean = stats->mean;
    rec.summary.std = stats->std;
    rec.summary.n = 0;
    return rec;
}

json summary_json(const fid::metrics::SampleSummary& s) {
    return json{{"mean", s.mean}, {"std", s.std}, {"n", s.n}};
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << body;
    if (!out) throw std::invalid_argument("cannot write file: " + path);
}

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Named referent functions shared by the surrogate/taylor/overfit commands.
struct NamedFunction {
    std::string name;
    fid::scenario::RealFn fn;
    fid::surrogate::DerivativeFn derivative;  // derivative(k, x)
};

NamedFunction lookup_function(const std::string& name) {
    if (name == "sin") {
        return {"sin", [](double x) { return std::sin(x); },
                [](int k, double x) {
                    return std::sin(x + 0.5 * kPi * static_cast<double>(k));
                }};
    }
    if (name == "exp") {
        return {"exp", [](double x) { return std::exp(x); },
                [](int, double x) { return std::exp(x); }};
    }
    if (name == "quintic") {
        return {"quintic", [](double x) { return std::pow(x, 5.0); },
                [](int k, double x) {
                    if (k > 5) return 0.0;
                    double coeff = 1.0;
                    for (int i = 0; i < k; ++i) {
                        coeff *= static_cast<double>(5 - i);
                    }
                    return coeff * std::pow(x, static_cast<double>(5 - k));
                }};
    }
    throw std::invalid_argument(
        "unknown function '" + name + "' (expected sin, exp, or quintic)");
}

// Largest |k-th derivative| over a dense scan of [lo, hi].
double dense_derivative_bound(const NamedFunction& f, int k, double lo,
                              double hi) {
    constexpr int kScan = 10001;
    double m = 0.0;
    for (int i = 0; i < kScan; ++i) {
        const double x =
            lo + (hi - lo) * static_cast<double>(i) / (kScan - 1);
        m = std::fmax(m, std::fabs(f.derivative(k, x)));
    }
    return m;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
    std::vector<std::string> models;
    std::string referent_file;
    std::string referent_stats;
    std::string format = "table";
    int precision = 6;
    bool population = false;
    std::string out_json;
};

int run_eval(const EvalOpts& o) {
    if (o.referent_file.empty() == o.referent_stats.empty()) {
        throw std::invalid_argument(
            "eval: provide exactly one of --referent or --referent-stats");
    }
    std::string referent_name = "referent";
    fid::metrics::SampleSummary referent;
    if (!o.referent_file.empty()) {
        const std::vector<double> samples =
            fid::report::load_samples(o.referent_file);
        referent_name =
            std::filesystem::path(o.referent_file).stem().string();
        referent = fid::metrics::summarize(samples, !o.population);
    } else {
        const auto stats = parse_stats(o.referent_stats, "referent");
        if (!stats) {
            throw std::invalid_argument(
                "eval: --referent-stats expects MEAN,STD or NAME:MEAN,STD");
        }
        referent_name = stats->name;
        referent.mean = stats->mean;
        referent.std = stats->std;
    }
    std::vector<fid::metrics::ModelRecord> records;
    records.reserve(o.models.size());
    for (const auto& arg : o.models) {
        records.push_back(model_from_arg(arg, o.population));
    }
    const fid::report::FidelityReport report =
        fid::report::make_report(referent_name, referent, records);
    if (o.format == "json") {
        std::cout << fid::report::report_to_json(report).dump(2) << "\n";
    } else {
        std::cout << fid::report::report_to_table(report, o.precision);
    }
    if (!o.out_json.empty()) {
        write_text_file(o.out_json,
                        fid::report::report_to_json(report).dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// rank

struct RankOpts {
    std::string registry;
    std::string mode = "both";
    std::string format = "table";
    int precision = 6;
};

std::string ranking_table(const fid::metrics::Ranking& ranking,
                          const std::string& score_label, int precision) {
    std::ostringstream os;
    std::size_t name_w = 5;
    for (const auto& e : ranking.entries) {
        name_w = std::max(name_w, e.name.size());
    }
    os << "Rank  " << "Model" << std::string(name_w - 5, ' ') << "  "
       << score_label << "\n";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        const auto& e = ranking.entries[i];
        os << std::setw(4) << (i + 1) << "  " << e.name
           << std::string(name_w - e.name.size(), ' ') << "  "
           << fid::report::format_double(e.score, precision) << "\n";
    }
    return os.str();
}

int run_rank(const RankOpts& o) {
    const fid::report::Registry reg = fid::report::load_registry(o.registry);
    const bool want_abs = o.mode == "absolute" || o.mode == "both";
    const bool want_rel = o.mode == "relative" || o.mode == "both";
    fid::metrics::Ranking abs_rank, rel_rank;
    if (want_abs) {
        abs_rank = fid::metrics::rank_absolute(reg.models, reg.referent);
    }
    if (want_rel) {
        rel_rank = fid::metrics::rank_relative(reg.models, reg.referent);
    }
    bool agree = true;
    if (o.mode == "both") {
        for (std::size_t i = 0; i < abs_rank.entries.size(); ++i) {
            if (abs_rank.entries[i].name != rel_rank.entries[i].name) {
                agree = false;
            }
        }
    }
    if (o.format == "json") {
        json out = {{"schema", "fidelity-ranking-v1"},
                    {"mode", o.mode},
                    {"tie_policy", "lexicographic-name"}};
        const auto entries = [](const fid::metrics::Ranking& r,
                                const char* key) {
            json arr = json::array();
            for (const auto& e : r.entries) {
                arr.push_back({{"name", e.name}, {key, e.score}});
            }
            return arr;
        };
        if (want_abs) out["absolute"] = entries(abs_rank, "f");
        if (want_rel) out["relative"] = entries(rel_rank, "row_sum");
        if (o.mode == "both") out["order_agreement"] = agree;
        std::cout << out.dump(2) << "\n";
    } else {
        if (want_abs) {
            std::cout << "Absolute ranking (score = f):\n"
                      << ranking_table(abs_rank, "f", o.precision);
        }
        if (want_abs && want_rel) std::cout << "\n";
        if (want_rel) {
            std::cout << "Relative ranking (score = pairwise row sum):\n"
                      << ranking_table(rel_rank, "row_sum", o.precision);
        }
        if (o.mode == "both") {
            std::cout << "\norder agreement: " << (agree ? "PASS" : "FAIL")
                      << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// map

struct MapOpts {
    std::string regions;
    std::string format = "json";
    std::string out_csv;
    int precision = 6;
};

int run_map(const MapOpts& o) {
    const std::vector<fid::report::MapRegion> regions =
        fid::report::load_map_regions(o.regions);
    std::vector<fid::scenario::SummarizedRegion> model, referent;
    model.reserve(regions.size());
    referent.reserve(regions.size());
    for (const auto& r : regions) {
        const fid::scenario::ScenarioDomain d{r.lo, r.hi, r.resolution};
        model.push_back({d, r.model});
        referent.push_back({d, r.referent});
    }
    const auto scored = fid::scenario::fidelity_map(model, referent);

    json rows = json::array();
    std::ostringstream csv;
    csv << "domain_lo,domain_hi,f,f_a,f_v,percent_error\n";
    for (const auto& [domain, score] : scored) {
        json row = {{"lo", domain.lo},
                    {"hi", domain.hi},
                    {"resolution", domain.resolution},
                    {"f", score.f},
                    {"f_a", score.f_a},
                    {"f_v", score.f_v}};
        row["percent_error"] =
            score.percent_error ? json(*score.percent_error) : json(nullptr);
        rows.push_back(std::move(row));
        csv << csv_num(domain.lo) << "," << csv_num(domain.hi) << ","
            << csv_num(score.f) << "," << csv_num(score.f_a) << ","
            << csv_num(score.f_v) << ",";
        if (score.percent_error) csv << csv_num(*score.percent_error);
        csv << "\n";
    }
    if (o.format == "json") {
        const json out = {{"schema", "fidelity-map-v1"}, {"regions", rows}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::ostringstream os;
        os << "Domain lo  Domain hi  f  f_a  f_v  Percent Error\n";
        for (const auto& [domain, score] : scored) {
            os << fid::report::format_double(domain.lo, o.precision) << "  "
               << fid::report::format_double(domain.hi, o.precision) << "  "
               << fid::report::format_double(score.f, o.precision) << "  "
               << fid::report::format_double(score.f_a, o.precision) << "  "
               << fid::report::format_double(score.f_v, o.precision) << "  "
               << (score.percent_error
                       ? fid::report::format_double(*score.percent_error,
                                                    o.precision)
                       : std::string("n/a"))
               << "\n";
        }
        std::cout << os.str();
    }
    if (!o.out_csv.empty()) write_text_file(o.out_csv, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// surrogate

struct SurrogateOpts {
    std::string fn = "sin";
    double lo = 0.0;
    double hi = kPi;
    int degree = 4;
    int mc_runs = 500;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    std::string out_trace;
};

int run_surrogate(const SurrogateOpts& o) {
    const NamedFunction f = lookup_function(o.fn);
    const fid::surrogate::PolynomialModel model =
        fid::surrogate::interpolate_equispaced(f.fn, o.lo, o.hi, o.degree);
    const double deriv_bound =
        dense_derivative_bound(f, o.degree + 1, o.lo, o.hi);
    const fid::surrogate::ErrorBound bound =
        fid::surrogate::interpolation_error_bound(deriv_bound, o.degree,
                                                  o.lo, o.hi);
    constexpr int kScan = 10001;
    std::vector<double> xs(kScan), ref(kScan);
    for (int i = 0; i < kScan; ++i) {
        xs[static_cast<std::size_t>(i)] =
            o.lo + (o.hi - o.lo) * static_cast<double>(i) / (kScan - 1);
        ref[static_cast<std::size_t>(i)] =
            f.fn(xs[static_cast<std::size_t>(i)]);
    }
    const std::vector<double> fit = model.eval(xs);
    const double empirical_max = fid::kernels::max_abs_diff(fit, ref);

    const fid::scenario::ScenarioDomain domain{o.lo, o.hi,
                                              (o.hi - o.lo) / 1000.0};
    const fid::surrogate::SurrogateFidelity mc =
        fid::surrogate::surrogate_fidelity_check(model, f.fn, domain,
                                                 o.noise_std, o.mc_runs,
                                                 o.seed);
    const json out = {
        {"schema", "fidelity-surrogate-v1"},
        {"referent", f.name},
        {"degree", o.degree},
        {"lo", o.lo},
        {"hi", o.hi},
        {"seed", o.seed},
        {"mc_runs", o.mc_runs},
        {"noise_std", o.noise_std},
        {"f_surrogate", mc.f_surrogate},
        {"f_referent", mc.f_referent},
        {"error_bound",
         {{"bound", bound.bound},
          {"derivative_bound", bound.derivative_bound},
          {"spacing", bound.spacing},
          {"degree", bound.degree}}},
        {"empirical_max_error", empirical_max},
        {"bound_satisfied", empirical_max <= bound.bound},
        {"surrogate_summary", summary_json(mc.surrogate_summary)},
        {"referent_summary", summary_json(mc.referent_summary)},
    };
    std::cout << out.dump(2) << "\n";
    if (!o.out_trace.empty()) {
        std::ostringstream csv;
        csv << "x,referent,surrogate\n";
        constexpr int kTrace = 1001;
        std::vector<double> txs(kTrace);
        for (int i = 0; i < kTrace; ++i) {
            txs[static_cast<std::size_t>(i)] =
                o.lo + (o.hi - o.lo) * static_cast<double>(i) / (kTrace - 1);
        }
        const std::vector<double> tfit = model.eval(txs);
        for (int i = 0; i < kTrace; ++i) {
            const auto u = static_cast<std::size_t>(i);
            csv << csv_num(txs[u]) << "," << csv_num(f.fn(txs[u])) << ","
                << csv_num(tfit[u]) << "\n";
        }
        write_text_file(o.out_trace, csv.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// taylor

struct TaylorOpts {
    std::string fn = "sin";
    double center = 1.0;
    std::vector<int> orders = {1, 3, 5};
    double lo = -2.0 * kPi;
    double hi = 2.0 * kPi;
    std::string criterion = "relative";
    double threshold = 0.01;
    double resolution = 0.01;
    std::string out_csv;
};

int run_taylor(const TaylorOpts& o) {
    const NamedFunction f = lookup_function(o.fn);
    const std::vector<fid::surrogate::PolynomialModel> family =
        fid::surrogate::taylor_family(f.derivative, o.center, o.orders);
    const fid::scenario::ScenarioDomain domain{o.lo, o.hi, o.resolution};
    fid::scenario::ValidityCriterion crit;
    crit.kind = o.criterion == "absolute"
                    ? fid::scenario::ValidityCriterion::Kind::AbsoluteError
                    : fid::scenario::ValidityCriterion::Kind::RelativeError;
    crit.threshold = o.threshold;

    json rows = json::array();
    std::ostringstream csv;
    csv << "order,validity_lo,validity_hi,width\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& model = family[i];
        const fid::scenario::ValidityRange range = fid::scenario::validity_range(
            [&model](double x) { return model(x); }, f.fn, domain, crit);
        double vlo = o.center, vhi = o.center, width = 0.0;
        for (const auto& [a, b] : range.intervals) {
            if (o.center >= a && o.center <= b) {
                vlo = a;
                vhi = b;
                width = b - a;
                break;
            }
        }
        rows.push_back({{"order", o.orders[i]},
                        {"validity_lo", vlo},
                        {"validity_hi", vhi},
                        {"width", width}});
        csv << o.orders[i] << "," << csv_num(vlo) << "," << csv_num(vhi)
            << "," << csv_num(width) << "\n";
    }
    const json out = {{"schema", "fidelity-taylor-v1"},
                      {"fn", f.name},
                      {"center", o.center},
                      {"criterion", o.criterion},
                      {"threshold", o.threshold},
                      {"domain",
                       {{"lo", o.lo},
                        {"hi", o.hi},
                        {"resolution", o.resolution}}},
                      {"rows", rows}};
    std::cout << out.dump(2) << "\n";
    if (!o.out_csv.empty()) write_text_file(o.out_csv, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// overfit

struct OverfitOpts {
    std::uint64_t seed = 0;
    std::uint64_t holdout_seed = 0;
    int samples = 30;
    double noise_std = 0.2;
    int low_degree = 3;
    int high_degree = 9;
    double lo = -1.5;
    double hi = 1.5;
    std::string out_csv;
};

double cubic_truth(double x) { return 0.5 * x * x * x - 1.2 * x + 0.3; }

void draw_noisy_set(std::uint64_t seed, int n, double lo, double hi,
                    double noise_std, std::vector<double>& xs,
                    std::vector<double>& ys) {
    fid::RandomStream rs(seed);
    xs.resize(static_cast<std::size_t>(n));
    ys.resize(static_cast<std::size_t>(n));
    for (auto& x : xs) x = rs.uniform(lo, hi);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ys[i] = cubic_truth(xs[i]) + rs.normal(0.0, noise_std);
    }
}

double rmse(const fid::surrogate::PolynomialModel& model,
            const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::vector<double> fit = model.eval(xs);
    return std::sqrt(fid::kernels::sum_sq_diff(fit, ys) /
                     static_cast<double>(xs.size()));
}

int run_overfit(const OverfitOpts& o) {
    if (o.samples < o.high_degree + 1) {
        throw std::invalid_argument(
            "overfit: need at least high-degree+1 samples");
    }
    std::vector<double> train_x, train_y, hold_x, hold_y;
    draw_noisy_set(o.seed, o.samples, o.lo, o.hi, o.noise_std, train_x,
                   train_y);
    draw_noisy_set(o.holdout_seed, o.samples, o.lo, o.hi, o.noise_std,
                   hold_x, hold_y);
    const auto low =
        fid::surrogate::fit_least_squares(train_x, train_y, o.low_degree);
    const auto high =
        fid::surrogate::fit_least_squares(train_x, train_y, o.high_degree);
    const double train_low = rmse(low, train_x, train_y);
    const double train_high = rmse(high, train_x, train_y);
    const double hold_low = rmse(low, hold_x, hold_y);
    const double hold_high = rmse(high, hold_x, hold_y);
    const json out = {
        {"schema", "fidelity-overfit-v1"},
        {"seed", o.seed},
        {"holdout_seed", o.holdout_seed},
        {"samples", o.samples},
        {"noise_std", o.noise_std},
        {"truth", "0.5*x^3 - 1.2*x + 0.3"},
        {"lo", o.lo},
        {"hi", o.hi},
        {"degrees", {{"low", o.low_degree}, {"high", o.high_degree}}},
        {"train_rmse", {{"low", train_low}, {"high", train_high}}},
        {"holdout_rmse", {{"low", hold_low}, {"high", hold_high}}},
        {"crossover", train_high < train_low && hold_high > hold_low},
    };
    std::cout << out.dump(2) << "\n";
    if (!o.out_csv.empty()) {
        std::ostringstream csv;
        csv << "x,truth,fit_low,fit_high\n";
        constexpr int kTrace = 401;
        std::vector<double> txs(kTrace);
        for (int i = 0; i < kTrace; ++i) {
            txs[static_cast<std::size_t>(i)] =
                o.lo + (o.hi - o.lo) * static_cast<double>(i) / (kTrace - 1);
        }
        const std::vector<double> lo_fit = low.eval(txs);
        const std::vector<double> hi_fit = high.eval(txs);
        for (int i = 0; i < kTrace; ++i) {
            const auto u = static_cast<std::size_t>(i);
            csv << csv_num(txs[u]) << "," << csv_num(cubic_truth(txs[u]))
                << "," << csv_num(lo_fit[u]) << "," << csv_num(hi_fit[u])
                << "\n";
        }
        write_text_file(o.out_csv, csv.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gradeability

struct GradeOpts {
    std::string config;
    int runs = 200;
    std::uint64_t seed = 0;
    std::string out_csv;
};

int run_gradeability(const GradeOpts& o) {
    fid::report::GradeabilityConfig cfg;
    if (!o.config.empty()) {
        cfg = fid::report::load_gradeability_config(o.config);
    }
    const fid::gradeability::MonteCarloResult mc =
        fid::gradeability::monte_carlo_ca(cfg.vehicle, cfg.soil, o.runs,
                                          o.seed);
    const json out = {
        {"schema", "fidelity-gradeability-v1"},
        {"seed", o.seed},
        {"runs", o.runs},
        {"vehicle",
         {{"weight_kn", cfg.vehicle.weight_kn},
          {"contact_area_m2", cfg.vehicle.contact_area_m2},
          {"rolling_resistance", cfg.vehicle.rolling_resistance},
          {"tire_efficiency", cfg.vehicle.tire_efficiency}}},
        {"soil",
         {{"cohesion_mean_kpa", cfg.soil.cohesion_mean_kpa},
          {"cohesion_std_kpa", cfg.soil.cohesion_std_kpa},
          {"friction_mean_deg", cfg.soil.friction_mean_deg},
          {"friction_std_deg", cfg.soil.friction_std_deg},
          {"roughness_std", cfg.soil.roughness_std}}},
        {"summary", summary_json(mc.summary)},
        {"censored_low", mc.censored_low},
        {"censored_high", mc.censored_high},
        {"degenerate", mc.degenerate},
    };
    std::cout << out.dump(2) << "\n";
    if (!o.out_csv.empty()) {
        fid::report::write_samples_csv(o.out_csv, "critical_angle_pct",
                                       mc.samples);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// variants

struct VariantOpts {
    std::string doe;
    double epsilon = -1.0;  // negative selects the default 1% rule
    std::string out_csv;
    std::string out_report;
};

int run_variants(const VariantOpts& o) {
    fid::report::DoeConfig cfg;
    if (!o.doe.empty()) {
        cfg = fid::report::load_doe_config(o.doe);
    } else {
        cfg.points = fid::variants::default_grid();
    }
    const fid::variants::DoeTable table =
        fid::variants::doe_run(cfg.spring, cfg.points, cfg.costs);
    const double epsilon =
        o.epsilon >= 0.0
            ? o.epsilon
            : 0.01 * fid::variants::max_abs_deformation(table);
    const fid::variants::SelectionReport sel =
        fid::variants::select_cheapest_acceptable(table, epsilon);

    json points = json::array();
    for (std::size_t p = 0; p < table.points.size(); ++p) {
        const auto& pt = table.points[p];
        const int chosen = sel.chosen[p];
        const auto& resp =
            table.responses[p][static_cast<std::size_t>(chosen)];
        const auto& ref = table.responses[p][fid::variants::kVariantCount - 1];
        points.push_back({
            {"point", p},
            {"load_n", pt.load_n},
            {"temperature_c", pt.temperature_c},
            {"length_multiplier", pt.length_multiplier},
            {"chosen_variant",
             fid::variants::VariantFlags::from_index(chosen).label()},
            {"chosen_cost", resp.cost},
            {"deformation_mm", resp.deformation_mm},
            {"failure", fid::variants::to_string(resp.failure)},
            {"referent_deformation_mm", ref.deformation_mm},
            {"referent_failure", fid::variants::to_string(ref.failure)},
        });
    }
    const json out = {
        {"schema", "fidelity-variants-v1"},
        {"epsilon", epsilon},
        {"epsilon_rule",
         o.epsilon >= 0.0 ? "explicit" : "1% of max |deformation|"},
        {"chosen_cost_total", sel.chosen_cost_total},
        {"referent_cost_total", sel.referent_cost_total},
        {"cost_ratio", sel.cost_ratio},
        {"points", points},
    };
    std::cout << out.dump(2) << "\n";

    if (!o.out_csv.empty()) {
        std::ostringstream csv;
        csv << "point,variant,accepted\n";
        for (std::size_t p = 0; p < sel.accepted.size(); ++p) {
            for (int v = 0; v < fid::variants::kVariantCount; ++v) {
                const auto flags = fid::variants::VariantFlags::from_index(v);
                const auto arr = flags.as_array();
                csv << p << ",";
                for (const int bit : arr) csv << bit;
                csv << ","
                    << (sel.accepted[p][static_cast<std::size_t>(v)] ? 1 : 0)
                    << "\n";
            }
        }
        write_text_file(o.out_csv, csv.str());
    }
    if (!o.out_report.empty()) {
        write_text_file(o.out_report, out.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-fidelity evaluation toolkit"};
    app.set_version_flag("--version", fidelity::report::kToolVersion);
    app.require_subcommand(1);

    std::function<int()> action;

    EvalOpts eval_opts;
    CLI::App* eval = app.add_subcommand(
        "eval", "Score models against a referent (fidelity report)");
    eval->add_option("--model", eval_opts.models,
                     "Sample file (CSV/JSON) or NAME:MEAN,STD shorthand; "
                     "repeatable")
        ->required();
    eval->add_option("--referent", eval_opts.referent_file,
                     "Referent sample file (CSV/JSON)");
    eval->add_option("--referent-stats", eval_opts.referent_stats,
                     "Referent summary as MEAN,STD or NAME:MEAN,STD");
    eval->add_option("--format", eval_opts.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}));
    eval->add_option("--precision", eval_opts.precision,
                     "Significant digits for table output")
        ->check(CLI::Range(1, 17));
    eval->add_flag("--population", eval_opts.population,
                   "Use the population (n) std divisor instead of n-1");
    eval->add_option("--out", eval_opts.out_json,
                     "Also write the JSON report to this file");
    eval->callback([&] { action = [&] { return run_eval(eval_opts); }; });

    RankOpts rank_opts;
    CLI::App* rank =
        app.add_subcommand("rank", "Rank registry models against a referent");
    rank->add_option("--registry", rank_opts.registry,
                     "fidelity-registry-v1 JSON file")
        ->required();
    rank->add_option("--mode", rank_opts.mode, "Ranking mode")
        ->check(CLI::IsMember({"absolute", "relative", "both"}));
    rank->add_option("--format", rank_opts.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}));
    rank->add_option("--precision", rank_opts.precision,
                     "Significant digits for table output")
        ->check(CLI::Range(1, 17));
    rank->callback([&] { action = [&] { return run_rank(rank_opts); }; });

    MapOpts map_opts;
    CLI::App* map = app.add_subcommand(
        "map", "Per-region fidelity map over scenario domains");
    map->add_option("--regions", map_opts.regions,
                    "fidelity-map-regions-v1 JSON file")
        ->required();
    map->add_option("--format", map_opts.format, "Output format")
        ->check(CLI::IsMember({"table", "json"}));
    map->add_option("--precision", map_opts.precision,
                    "Significant digits for table output")
        ->check(CLI::Range(1, 17));
    map->add_option("--out", map_opts.out_csv, "Write a plot-ready CSV here");
    map->callback([&] { action = [&] { return run_map(map_opts); }; });

    SurrogateOpts sur_opts;
    CLI::App* sur = app.add_subcommand(
        "surrogate",
        "Interpolation surrogate: error bound plus Monte Carlo fidelity");
    sur->add_option("--fn", sur_opts.fn, "Referent function")
        ->check(CLI::IsMember({"sin", "exp", "quintic"}));
    sur->add_option("--lo", sur_opts.lo, "Interval lower bound");
    sur->add_option("--hi", sur_opts.hi, "Interval upper bound");
    sur->add_option("--degree", sur_opts.degree, "Interpolation degree");
    sur->add_option("--mc-runs", sur_opts.mc_runs,
                    "Monte Carlo runs (>= 100)");
    sur->add_option("--noise-std", sur_opts.noise_std,
                    "Shared output-noise std");
    sur->add_option("--seed", sur_opts.seed, "Random seed")->required();
    sur->add_option("--out-trace", sur_opts.out_trace,
                    "Write an x,referent,surrogate CSV here");
    sur->callback([&] { action = [&] { return run_surrogate(sur_opts); }; });

    TaylorOpts taylor_opts;
    CLI::App* taylor = app.add_subcommand(
        "taylor", "Taylor-model family and validity ranges");
    taylor->add_option("--fn", taylor_opts.fn, "Referent function")
        ->check(CLI::IsMember({"sin", "exp", "quintic"}));
    taylor->add_option("--center", taylor_opts.center, "Expansion point");
    taylor->add_option("--orders", taylor_opts.orders,
                       "Taylor orders (repeatable/comma-separated)")
        ->delimiter(',');
    taylor->add_option("--lo", taylor_opts.lo, "Domain lower bound");
    taylor->add_option("--hi", taylor_opts.hi, "Domain upper bound");
    taylor->add_option("--criterion", taylor_opts.criterion,
                       "Validity criterion kind")
        ->check(CLI::IsMember({"relative", "absolute"}));
    taylor->add_option("--threshold", taylor_opts.threshold,
                       "Criterion threshold");
    taylor->add_option("--resolution", taylor_opts.resolution,
                       "Scan resolution");
    taylor->add_option("--out", taylor_opts.out_csv,
                       "Write an order,validity CSV here");
    taylor->callback(
        [&] { action = [&] { return run_taylor(taylor_opts); }; });

    OverfitOpts over_opts;
    CLI::App* over = app.add_subcommand(
        "overfit", "Train/holdout RMSE demonstration of overfitting");
    over->add_option("--seed", over_opts.seed, "Training-set seed")
        ->required();
    over->add_option("--holdout-seed", over_opts.holdout_seed,
                     "Holdout-set seed")
        ->required();
    over->add_option("--samples", over_opts.samples, "Points per set");
    over->add_option("--noise-std", over_opts.noise_std, "Output noise std");
    over->add_option("--low-degree", over_opts.low_degree,
                     "Well-posed fit degree");
    over->add_option("--high-degree", over_opts.high_degree,
                     "Overfitting fit degree");
    over->add_option("--out", over_opts.out_csv,
                     "Write an x,truth,fit CSV here");
    over->callback([&] { action = [&] { return run_overfit(over_opts); }; });

    GradeOpts grade_opts;
    CLI::App* grade = app.add_subcommand(
        "gradeability", "Monte Carlo critical-angle study");
    grade->add_option("--config", grade_opts.config,
                      "fidelity-gradeability-config-v1 JSON file");
    grade->add_option("--runs", grade_opts.runs, "Monte Carlo runs (>= 30)");
    grade->add_option("--seed", grade_opts.seed, "Master seed")->required();
    grade->add_option("--out", grade_opts.out_csv,
                      "Write per-run critical angles CSV here");
    grade->callback(
        [&] { action = [&] { return run_gradeability(grade_opts); }; });

    VariantOpts var_opts;
    CLI::App* var = app.add_subcommand(
        "variants", "Coil-spring variant DoE and cost-aware selection");
    var->add_option("--doe", var_opts.doe,
                    "fidelity-variants-doe-v1 JSON file");
    var->add_option("--epsilon", var_opts.epsilon,
                    "Deflection tolerance in mm (default: 1% of max "
                    "|deformation|)");
    var->add_option("--out", var_opts.out_csv,
                    "Write the point,variant,accepted CSV here");
    var->add_option("--out-report", var_opts.out_report,
                    "Also write the JSON report to this file");
    var->callback([&] { action = [&] { return run_variants(var_opts); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
