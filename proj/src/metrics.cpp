#include "fidelity/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fidelity/kernels.hpp"

namespace fidelity::metrics {
namespace {

double log_accuracy(const SampleSummary& model, const SampleSummary& referent) {
    if (!(referent.std > 0.0)) {
        throw std::domain_error("degenerate referent: std must be > 0");
    }
    const double z = (model.mean - referent.mean) / referent.std;
    return -0.5 * z * z;
}

double log_variability(const SampleSummary& model,
                       const SampleSummary& referent) {
    if (!(model.std > 0.0) || !(referent.std > 0.0)) {
        throw std::domain_error("degenerate variance: stds must be > 0");
    }
    const double d = model.std - referent.std;
    return -(d * d) / (model.std * referent.std);
}

void check_unique_names(std::span<const ModelRecord> models) {
    std::vector<std::string> names;
    names.reserve(models.size());
    for (const auto& m : models) names.push_back(m.name);
    std::sort(names.begin(), names.end());
    const auto dup = std::adjacent_find(names.begin(), names.end());
    if (dup != names.end()) {
        throw std::domain_error("duplicate model name: " + *dup);
    }
}

void sort_entries(std::vector<RankingEntry>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const RankingEntry& a, const RankingEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.name < b.name;
              });
}

}  // namespace

SampleSummary summarize(std::span<const double> samples, bool bias_corrected) {
    if (samples.empty()) {
        throw std::invalid_argument("no samples");
    }
    SampleSummary out;
    out.n = samples.size();
    out.mean = kernels::sum(samples) / static_cast<double>(samples.size());
    if (samples.size() == 1) {
        out.std = 0.0;
        out.single_sample = bias_corrected;
        return out;
    }
    const double ssd = kernels::sum_sq_dev(samples, out.mean);
    const double divisor = bias_corrected
                               ? static_cast<double>(samples.size() - 1)
                               : static_cast<double>(samples.size());
    out.std = std::sqrt(ssd / divisor);
    return out;
}

double accuracy_component(const SampleSummary& model,
                          const SampleSummary& referent) {
    return std::exp(log_accuracy(model, referent));
}

double variability_component(const SampleSummary& model,
                             const SampleSummary& referent) {
    return std::exp(log_variability(model, referent));
}

FidelityScore fidelity_score(const SampleSummary& model,
                             const SampleSummary& referent) {
    const double la = log_accuracy(model, referent);
    const double lv = log_variability(model, referent);
    FidelityScore score;
    score.f_a = std::exp(la);
    score.f_v = std::exp(lv);
    score.f = std::exp(la + lv);
    if (referent.mean != 0.0) {
        score.percent_error =
            100.0 * std::fabs(model.mean - referent.mean) /
            std::fabs(referent.mean);
    }
    return score;
}

double predictor_information(double error_probability) {
    if (!(error_probability >= 0.0 && error_probability <= 1.0)) {
        throw std::invalid_argument(
            "predictor_information: error probability must lie in [0, 1]");
    }
    const double p = error_probability;
    if (p == 0.0 || p == 1.0) return 1.0;
    const double h = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    return 1.0 - h;
}

Ranking rank_absolute(std::span<const ModelRecord> models,
                      const SampleSummary& referent) {
    check_unique_names(models);
    Ranking out;
    out.tie_policy = "lexicographic-name";
    out.entries.reserve(models.size());
    for (const auto& m : models) {
        out.entries.push_back({m.name, fidelity_score(m.summary, referent).f});
    }
    sort_entries(out.entries);
    return out;
}

Ranking rank_relative(std::span<const ModelRecord> models,
                      const SampleSummary& referent) {
    check_unique_names(models);
    std::vector<double> f;
    f.reserve(models.size());
    for (const auto& m : models) {
        f.push_back(fidelity_score(m.summary, referent).f);
    }
    Ranking out;
    out.tie_policy = "lexicographic-name";
    out.entries.reserve(models.size());
    std::vector<std::size_t> order(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) order[i] = i;
    // The exact row sum of D[i][j] = f_i - f_j is n*f_i - sum(f), which
    // orders models exactly as f does. Comparing the rounded row sums
    // instead can absorb minuscule scores into spurious ties, so sort by
    // the exact order and keep the computed row sum as the reported score.
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (f[a] != f[b]) return f[a] > f[b];
                  return models[a].name < models[b].name;
              });
    for (const std::size_t i : order) {
        double row = 0.0;
        for (std::size_t j = 0; j < models.size(); ++j) row += f[i] - f[j];
        out.entries.push_back({models[i].name, row});
    }
    return out;
}

}  // namespace fidelity::metrics
