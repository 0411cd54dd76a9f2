#include "mdl/featsel.hpp"

#include "mdl/config.hpp"
#include "mdl/dtree.hpp"
#include "mdl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mdl::featsel {

std::optional<double> binary_correlation(const PairCounts& counts) {
    if (counts.total() == 0) throw invalid_input("binary_correlation: empty input");
    const auto a = static_cast<double>(counts.n00);
    const auto b = static_cast<double>(counts.n01);
    const auto c = static_cast<double>(counts.n10);
    const auto d = static_cast<double>(counts.n11);
    const double den = (a + b) * (c + d) * (a + c) * (b + d);
    if (den == 0.0) return std::nullopt;
    return (a * d - b * c) / std::sqrt(den);
}

std::optional<double> binary_correlation(std::span<const std::pair<bool, bool>> pairs) {
    if (pairs.empty()) throw invalid_input("binary_correlation: empty input");
    PairCounts counts;
    for (const auto& [r, s] : pairs) {
        if (r) (s ? counts.n11 : counts.n10)++;
        else (s ? counts.n01 : counts.n00)++;
    }
    return binary_correlation(counts);
}

double lemma1_sample_bound_raw(double eps, double v, double delta) {
    if (!(eps > 0.0 && eps < 1.0)) throw invalid_input("lemma1_sample_bound: eps in (0,1)");
    if (!(v > 0.0 && v <= 0.5)) throw invalid_input("lemma1_sample_bound: v in (0, 1/2]");
    if (!(delta > 0.0 && delta < 1.0)) throw invalid_input("lemma1_sample_bound: delta in (0,1)");
    return 2048.0 / (eps * eps * eps * eps) / (v * v) * std::log(8.0 / delta);
}

std::uint64_t lemma1_sample_bound(double eps, double v, double delta) {
    return static_cast<std::uint64_t>(std::ceil(lemma1_sample_bound_raw(eps, v, delta)));
}

namespace {

/// Counts for one dataset: per-feature ones and ones-with-positive-label, via
/// column bitsets and the popcount kernels.
struct DatasetCounts {
    std::uint64_t m = 0;
    std::uint64_t positives = 0;
    std::vector<std::uint64_t> ones;     // per feature
    std::vector<std::uint64_t> ones_pos; // per feature, label 1

    DatasetCounts(const Dataset& ds, std::uint32_t n) {
        m = ds.size();
        BitVec label(m);
        std::vector<BitVec> cols(n, BitVec(m));
        for (std::size_t j = 0; j < m; ++j) {
            const Example& ex = ds.examples[j];
            for (std::uint32_t k = 0; k < n; ++k)
                if (ex.x.get(k)) cols[k].set(j, true);
            if (ex.y) label.set(j, true);
        }
        positives = label.count_ones();
        ones.resize(n);
        ones_pos.resize(n);
        for (std::uint32_t k = 0; k < n; ++k) {
            ones[k] = cols[k].count_ones();
            ones_pos[k] = count_and(cols[k], label);
        }
    }
};

PairCounts cell_counts(const DatasetCounts& c, std::uint32_t k) {
    PairCounts p;
    p.n11 = c.ones_pos[k];
    p.n10 = c.ones[k] - c.ones_pos[k];
    p.n01 = c.positives - c.ones_pos[k];
    p.n00 = c.m - c.ones[k] - p.n01;
    return p;
}

} // namespace

CorrelationTable correlation_table(std::span<const Dataset> datasets, std::uint32_t features) {
    CorrelationTable table;
    table.datasets = static_cast<std::uint32_t>(datasets.size());
    table.features = features;
    table.rho.assign(std::size_t(table.datasets) * features, 0.0);
    table.is_def.assign(std::size_t(table.datasets) * features, 0);
    for (std::uint32_t i = 0; i < table.datasets; ++i) {
        DatasetCounts counts(datasets[i], features);
        for (std::uint32_t k = 0; k < features; ++k) {
            auto r = binary_correlation(cell_counts(counts, k));
            std::size_t cell = std::size_t(i) * features + k;
            if (r) {
                table.rho[cell] = *r;
                table.is_def[cell] = 1;
            }
        }
    }
    return table;
}

CorrelationTable correlation_table(const MultiDomainSample& sample) {
    sample.validate();
    return correlation_table(sample.datasets, sample.dimension);
}

std::vector<double> pooled_correlations(std::span<const Dataset> datasets,
                                        std::uint32_t features) {
    std::vector<PairCounts> counts(features);
    for (const Dataset& ds : datasets) {
        DatasetCounts c(ds, features);
        for (std::uint32_t k = 0; k < features; ++k) {
            PairCounts p = cell_counts(c, k);
            counts[k].n00 += p.n00;
            counts[k].n01 += p.n01;
            counts[k].n10 += p.n10;
            counts[k].n11 += p.n11;
        }
    }
    std::vector<double> pooled(features);
    for (std::uint32_t k = 0; k < features; ++k) {
        auto r = binary_correlation(counts[k]);
        pooled[k] = r ? *r : std::numeric_limits<double>::quiet_NaN();
    }
    return pooled;
}

std::vector<double> pooled_correlations(const MultiDomainSample& sample) {
    sample.validate();
    return pooled_correlations(sample.datasets, sample.dimension);
}

std::vector<std::uint32_t> robust_features(const CorrelationTable& table, double beta) {
    std::vector<std::uint32_t> kept;
    for (std::uint32_t k = 0; k < table.features; ++k) {
        bool ok = true;
        for (std::uint32_t i = 0; i < table.datasets && ok; ++i) {
            double v = table.defined(i, k) ? std::abs(table.at(i, k)) : 0.0;
            ok = v >= beta;
        }
        if (ok) kept.push_back(k);
    }
    return kept;
}

ConceptClass ConceptClass::conjunctions() { return ConceptClass(); }

ConceptClass ConceptClass::finite(std::vector<Hypothesis> members) {
    if (members.empty()) throw invalid_input("ConceptClass::finite: empty class");
    ConceptClass c;
    c.members_ = std::make_shared<const std::vector<Hypothesis>>(std::move(members));
    return c;
}

namespace {

Example project(const Example& ex, std::span<const std::uint32_t> mask) {
    Example out;
    out.x = BitVec(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) out.x.set(i, ex.x.get(mask[i]));
    out.y = ex.y;
    return out;
}

} // namespace

Hypothesis fud(const MultiDomainSample& sample, const ConceptClass& concept_class, double beta,
               double eps) {
    sample.validate();
    if (!(beta > 0.0)) throw invalid_input("fud: beta must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw invalid_input("fud: eps must be in (0,1)");

    // Step 2: massive class imbalance yields a constant classifier.
    std::uint64_t total = 0, positives = 0;
    for (const Dataset& ds : sample.datasets) {
        total += ds.size();
        for (const Example& ex : ds.examples) positives += ex.y;
    }
    const double half_eps = eps / 2.0;
    if (static_cast<double>(positives) < half_eps * static_cast<double>(total))
        return Hypothesis::constant(false);
    if (static_cast<double>(total - positives) < half_eps * static_cast<double>(total))
        return Hypothesis::constant(true);

    // Steps 3-4: correlation table and the min-over-datasets threshold rule.
    CorrelationTable table = correlation_table(sample);
    std::vector<std::uint32_t> mask = robust_features(table, beta);

    // Step 5: a class member consistent with every projected example.
    std::vector<Example> projected;
    projected.reserve(total);
    for (const Dataset& ds : sample.datasets)
        for (const Example& ex : ds.examples) projected.push_back(project(ex, mask));

    if (concept_class.is_conjunction_class()) {
        std::vector<BitVec> pos;
        for (const Example& ex : projected)
            if (ex.y) pos.push_back(ex.x);
        // positives exist here: the step-2 gate already returned otherwise
        Conjunction c = largest_consistent_conjunction(pos);
        for (const Example& ex : projected)
            if (!ex.y && c.satisfied_by(ex.x))
                throw assumption_violation(
                    "FAIL: no conjunction over the selected features is consistent");
        return Hypothesis::masked(std::move(mask), Hypothesis::conj(std::move(c)));
    }

    for (const Hypothesis& h : concept_class.members()) {
        bool ok = true;
        for (const Example& ex : projected)
            if (h.predict(ex.x) != ex.y) {
                ok = false;
                break;
            }
        if (ok) return Hypothesis::masked(std::move(mask), h);
    }
    throw assumption_violation("FAIL: no class member is consistent on the selected features");
}

std::vector<double> correlation_stdev(const CorrelationTable& table) {
    std::vector<double> out(table.features);
    for (std::uint32_t k = 0; k < table.features; ++k) {
        double sum = 0.0, sum_sq = 0.0;
        std::uint32_t defined = 0;
        for (std::uint32_t i = 0; i < table.datasets; ++i) {
            if (!table.defined(i, k)) continue;
            ++defined;
            sum += table.at(i, k);
            sum_sq += table.at(i, k) * table.at(i, k);
        }
        if (defined == 0) {
            out[k] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double mean = sum / defined;
        out[k] = std::sqrt(std::max(0.0, sum_sq / defined - mean * mean));
    }
    return out;
}

std::vector<double> fsus_scores(const CorrelationTable& table, std::span<const double> pooled,
                                double alpha) {
    if (alpha < 0.0) throw invalid_input("fsus_scores: alpha must be >= 0");
    if (table.datasets == 0) throw invalid_input("fsus_scores: table needs >= 1 dataset");
    if (pooled.size() != table.features)
        throw invalid_input("fsus_scores: pooled size must match the table");
    std::vector<double> stdev = correlation_stdev(table);
    std::vector<double> scores(table.features);
    for (std::uint32_t k = 0; k < table.features; ++k) {
        if (std::isnan(stdev[k]) || std::isnan(pooled[k])) {
            scores[k] = -std::numeric_limits<double>::infinity();
            continue;
        }
        scores[k] = std::abs(pooled[k]) - alpha * stdev[k];
    }
    return scores;
}

std::vector<std::uint32_t> select_top(std::span<const double> scores, std::uint32_t count) {
    if (count < 1 || count > scores.size())
        throw invalid_input("select_top: count must be in [1, n]");
    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] > scores[b]; // stable: equal scores keep index order
    });
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

Hypothesis knn_train(std::span<const Example> sample, std::uint32_t k) {
    return Hypothesis::knn(std::vector<Example>(sample.begin(), sample.end()), k);
}

Hypothesis centroid_train(std::span<const Example> sample) {
    return Hypothesis::nearest_centroid(sample);
}

std::string correlation_table_csv(const CorrelationTable& table) {
    std::ostringstream out;
    out << "dataset";
    for (std::uint32_t k = 0; k < table.features; ++k) out << ",f" << (k + 1);
    out << '\n';
    for (std::uint32_t i = 0; i < table.datasets; ++i) {
        out << i;
        for (std::uint32_t k = 0; k < table.features; ++k) {
            out << ',';
            if (table.defined(i, k)) out << format_double(table.at(i, k));
        }
        out << '\n';
    }
    return out.str();
}

} // namespace mdl::featsel
