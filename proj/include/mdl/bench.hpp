#pragma once

#include "mdl/config.hpp"
#include "mdl/corpus.hpp"
#include "mdl/featsel.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdl::bench {

struct TrialRecord {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    std::string hypothesis;
    double error = std::numeric_limits<double>::quiet_NaN();
    double balanced_error = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t false_positives = 0;
    std::uint64_t negative_evals = 0;
    int recovered = -1; // -1 not applicable
    bool violation = false;
    bool passed = true;
    std::string note;

    friend bool operator==(const TrialRecord&, const TrialRecord&);
};

struct Aggregates {
    double mean_error = std::numeric_limits<double>::quiet_NaN();
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double q10 = std::numeric_limits<double>::quiet_NaN();
    double q50 = std::numeric_limits<double>::quiet_NaN();
    double q90 = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t false_positives = 0;
    std::uint64_t negative_evals = 0;
    std::uint32_t recovered_count = 0;
    std::uint32_t pass_count = 0;
    std::uint32_t violation_count = 0;
};

/// Mean/std/quantiles over the defined per-trial errors plus the count sums;
/// always derivable from the records alone.
Aggregates compute_aggregates(std::span<const TrialRecord> trials);

struct TrialReport {
    std::string experiment;
    std::string fingerprint; // of the resolved config
    Config config;
    std::vector<TrialRecord> trials;
    Aggregates aggregates;
    double bound = std::numeric_limits<double>::quiet_NaN(); // when applicable
    bool passed = false;
    std::string detail;
    // volatile metadata, excluded from reproducibility comparisons
    std::string timestamp;
    double runtime_seconds = 0.0;

    nlohmann::json to_json() const;
    /// Parses and re-derives the aggregates from the records, rejecting a
    /// report whose stored aggregates do not match.
    static TrialReport from_json(const nlohmann::json& j);
    std::string trials_csv() const;
};

std::vector<std::string> suite_names(); // dtree, massart, fud, lemma1, fsus

/// Runs one experiment suite from its config; the suite's acceptance
/// predicate lands in `passed` (threshold keys live in the config).
TrialReport run_suite(std::string_view suite, const Config& cfg);

enum class Selector { baseline, fsus };
enum class Classifier { knn, centroid };

struct XvalOptions {
    std::uint32_t train_domains = 1; // K
    Selector selector = Selector::baseline;
    double alpha = 2.0;
    std::vector<std::uint32_t> counts = {10, 20, 50};
    Classifier classifier = Classifier::knn;
    std::uint32_t knn_k = 5;
};

struct XvalCell {
    std::uint32_t count = 0;
    double mean_balanced_error = std::numeric_limits<double>::quiet_NaN();
    std::uint32_t pairs = 0;   // (subset, held-out domain) evaluations
    std::uint32_t skipped = 0; // splits missing a class
};

/// For every K-subset of the corpus domains: select features on the subset's
/// data (one dataset per domain), train the classifier on the pooled selected
/// features, and measure balanced error on each held-out domain. Cells
/// average over all (subset, held-out) pairs per feature count.
std::vector<XvalCell> cross_domain_validation(const BagOfWordsCorpus& corpus,
                                              const XvalOptions& options);

std::string xval_csv(std::span<const XvalCell> cells, const XvalOptions& options);

/// Scatter rows "feature,abs_pooled,stdev,selected" for plotting correlation
/// strength against cross-domain stability with the selection boundary at the
/// given alpha and count.
std::string emit_scatter(const featsel::CorrelationTable& table,
                         std::span<const double> pooled, double alpha, std::uint32_t count);

} // namespace mdl::bench
