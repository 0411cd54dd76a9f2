#pragma once

#include "mdl/hypothesis.hpp"
#include "mdl/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mdl::featsel {

/// Empirical correlations rho_hat[dataset][feature]; a cell is undefined when
/// the feature or the label is constant within that dataset.
struct CorrelationTable {
    std::uint32_t datasets = 0;
    std::uint32_t features = 0;
    std::vector<double> rho;          // row-major, defined cells only meaningful
    std::vector<std::uint8_t> is_def; // row-major

    double at(std::uint32_t i, std::uint32_t k) const {
        return rho[std::size_t(i) * features + k];
    }
    bool defined(std::uint32_t i, std::uint32_t k) const {
        return is_def[std::size_t(i) * features + k] != 0;
    }
};

/// 2x2 contingency counts of a binary pair (r, s): n00 counts (0,0), n01
/// counts (0,1), and so on.
struct PairCounts {
    std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

    std::uint64_t total() const { return n00 + n01 + n10 + n11; }
};

/// Pearson correlation of binary variables through the frequency form
/// (ad - bc) / sqrt((a+b)(c+d)(a+c)(b+d)); nullopt when a marginal factor is
/// zero (either variable constant).
std::optional<double> binary_correlation(const PairCounts& counts);
std::optional<double> binary_correlation(std::span<const std::pair<bool, bool>> pairs);

/// Sample size from the correlation concentration lemma:
/// ceil(2048 * eps^-4 * v^-2 * ln(8/delta)). Requires eps, delta in (0,1) and
/// v in (0, 1/2].
std::uint64_t lemma1_sample_bound(double eps, double v, double delta);
double lemma1_sample_bound_raw(double eps, double v, double delta); // before ceiling

/// rho_hat for every (dataset, feature) cell. The span overloads accept
/// datasets of unequal sizes (corpus domains); the MultiDomainSample form
/// enforces the equal-m invariant first.
CorrelationTable correlation_table(const MultiDomainSample& sample);
CorrelationTable correlation_table(std::span<const Dataset> datasets, std::uint32_t features);

/// Feature correlations over the concatenation of all datasets (the pooled
/// baseline score source). Undefined entries are NaN.
std::vector<double> pooled_correlations(const MultiDomainSample& sample);
std::vector<double> pooled_correlations(std::span<const Dataset> datasets,
                                        std::uint32_t features);

/// Step 4 of the selection algorithm: features whose minimum absolute
/// correlation across datasets reaches beta; undefined cells count as 0 and
/// therefore fail the threshold.
std::vector<std::uint32_t> robust_features(const CorrelationTable& table, double beta);

/// The concept class searched in the final step.
class ConceptClass {
public:
    static ConceptClass conjunctions();
    static ConceptClass finite(std::vector<Hypothesis> members);

    bool is_conjunction_class() const { return members_ == nullptr; }
    const std::vector<Hypothesis>& members() const { return *members_; }

private:
    ConceptClass() = default;
    std::shared_ptr<const std::vector<Hypothesis>> members_;
};

/// Correlation-thresholded feature selection followed by consistent learning
/// on the kept features. Steps: massive class imbalance short-circuits to a
/// constant classifier; otherwise keep R = robust_features(table, beta), find
/// a class member consistent with every (x[R], y) pair (for the conjunction
/// class: largest consistent conjunction over positives, verified against
/// negatives), and return it behind a feature mask. No consistent member
/// raises assumption_violation("FAIL").
Hypothesis fud(const MultiDomainSample& sample, const ConceptClass& concept_class, double beta,
               double eps);

/// Regularized per-feature scores s_k = |pooled_k| - alpha * stdev of the
/// defined per-dataset correlations (population form; a single defined entry
/// scores stdev 0). Features with no defined entry and NaN pooled values score
/// -infinity.
std::vector<double> fsus_scores(const CorrelationTable& table, std::span<const double> pooled,
                                double alpha);

/// Indices of the `count` largest scores, ties to the smaller index.
std::vector<std::uint32_t> select_top(std::span<const double> scores, std::uint32_t count);

/// Population standard deviation of the defined per-dataset correlations of
/// each feature (0 for a single defined entry, NaN for none): the regularizer
/// inside fsus_scores and the y-axis of the scatter export.
std::vector<double> correlation_stdev(const CorrelationTable& table);

/// Instance classifiers for the selected-feature pipelines.
Hypothesis knn_train(std::span<const Example> sample, std::uint32_t k);
Hypothesis centroid_train(std::span<const Example> sample);

/// Rows = datasets, columns = features, empty cell = undefined.
std::string correlation_table_csv(const CorrelationTable& table);

} // namespace mdl::featsel
