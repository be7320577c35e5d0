#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fidelity::metrics {

// Distribution summary of a scalar output channel.
struct SampleSummary {
    double mean = 0.0;
    double std = 0.0;   // bias-corrected by default (n - 1 divisor)
    std::size_t n = 0;
    // Set when a bias-corrected std was requested for a single sample; the
    // std is reported as 0 in that case.
    bool single_sample = false;
};

// Two-pass mean / standard deviation.  bias_corrected selects the n-1
// divisor (the default convention throughout the toolkit); population
// selects n.  Throws std::invalid_argument("no samples") on empty input.
SampleSummary summarize(std::span<const double> samples,
                        bool bias_corrected = true);

// Composite fidelity score of a model summary against a referent summary.
struct FidelityScore {
    double f = 0.0;    // f_a * f_v, computed in log space
    double f_a = 0.0;  // accuracy component, exp(-((mean_m-mean_r)/std_r)^2/2)
    double f_v = 0.0;  // variability component, exp(-(std_m-std_r)^2/(std_m*std_r))
    // 100 * |mean_m - mean_r| / |mean_r|; absent when the referent mean is 0.
    std::optional<double> percent_error;
};

// Accuracy component alone.  Throws std::domain_error("degenerate referent")
// when the referent std is not strictly positive.
double accuracy_component(const SampleSummary& model,
                          const SampleSummary& referent);

// Variability component alone.  Throws std::domain_error("degenerate
// variance") when either std is not strictly positive.
double variability_component(const SampleSummary& model,
                             const SampleSummary& referent);

// Full score; the composite is assembled in log space so equal summaries
// yield exactly 1.0.
FidelityScore fidelity_score(const SampleSummary& model,
                             const SampleSummary& referent);

// Information delivered by a binary predictor with error probability p:
// 1 - H2(p), where H2 is the binary entropy in bits.  p must lie in [0, 1];
// p = 0 and p = 1 both give 1 (an always-wrong predictor still informs).
double predictor_information(double error_probability);

// Named model entry for ranking.
struct ModelRecord {
    std::string name;
    SampleSummary summary;
    std::set<std::string> information_tags;
    std::optional<double> cost;
};

struct RankingEntry {
    std::string name;
    double score = 0.0;  // f for absolute ranking; score-difference row sum
                         // for relative ranking
};

struct Ranking {
    std::vector<RankingEntry> entries;  // best first
    std::string tie_policy;             // always "lexicographic-name"
};

// Ranks models by f against the referent, descending; ties broken by name.
// Throws std::domain_error on duplicate model names.
Ranking rank_absolute(std::span<const ModelRecord> models,
                      const SampleSummary& referent);

// Ranks models by the row sums of the pairwise score-difference matrix
// D[i][j] = f_i - f_j, descending; ties broken by name.  Produces the same
// ordering as rank_absolute.
Ranking rank_relative(std::span<const ModelRecord> models,
                      const SampleSummary& referent);

}  // namespace fidelity::metrics
