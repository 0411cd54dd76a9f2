#include "mdl/massart.hpp"

#include "mdl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mdl::massart {

Hypothesis cn_erm_finite(std::span<const Example> sample, std::span<const Hypothesis> classes,
                         double /*eta_bound*/) {
    if (sample.empty()) throw invalid_input("cn_erm_finite: empty sample");
    if (classes.empty()) throw invalid_input("cn_erm_finite: empty class");
    std::size_t best = 0;
    std::uint64_t best_wrong = ~0ULL;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        std::uint64_t wrong = 0;
        for (const Example& ex : sample)
            wrong += classes[i].predict(ex.x) != ex.y;
        if (wrong < best_wrong) { // strict: ties keep the lowest index
            best_wrong = wrong;
            best = i;
        }
    }
    return classes[best];
}

namespace {

/// Per-example columns of the sample: one bitset per feature plus the label
/// column, so literal statistics and candidate errors are popcount kernels.
struct ColumnView {
    std::size_t m = 0;
    std::uint32_t n = 0;
    std::vector<BitVec> feature; // feature[k] bit j = x_j[k]
    BitVec label;

    explicit ColumnView(std::span<const Example> sample)
        : m(sample.size()),
          n(static_cast<std::uint32_t>(sample.front().x.size())),
          label(sample.size()) {
        feature.assign(n, BitVec(m));
        for (std::size_t j = 0; j < m; ++j) {
            const Example& ex = sample[j];
            if (ex.x.size() != n) throw invalid_input("cn_conjunction: mixed dimensions");
            for (std::uint32_t k = 0; k < n; ++k)
                if (ex.x.get(k)) feature[k].set(j, true);
            if (ex.y) label.set(j, true);
        }
    }

    /// Satisfaction bitset of a conjunction across the sample.
    BitVec satisfied(const Conjunction& c) const {
        if (c.is_never()) return BitVec(m);
        BitVec sat(m, true);
        const auto& k = kern::active();
        for (const Literal& l : c.literals()) {
            const BitVec& col = feature[l.feature];
            if (l.value)
                k.and_inplace(sat.words().data(), col.words().data(), sat.word_count());
            else
                k.andnot_inplace(sat.words().data(), col.words().data(), sat.word_count());
        }
        return sat;
    }

    /// #(prediction != label) when predicting sat(x).
    std::uint64_t disagreements(const BitVec& sat) const {
        return kern::active().popcount_xor(sat.words().data(), label.words().data(),
                                           sat.word_count());
    }
};

struct LiteralStats {
    // literal l = 2k + b is x[k]=b; "violations" are examples with x[k] != b
    std::vector<std::uint64_t> violations;
    std::vector<std::uint64_t> violations_pos; // violating and noisy label 1

    explicit LiteralStats(const ColumnView& cols) {
        const std::uint32_t n = cols.n;
        violations.assign(2 * std::size_t(n), 0);
        violations_pos.assign(2 * std::size_t(n), 0);
        const std::uint64_t m = cols.m;
        const std::uint64_t ypos = cols.label.count_ones();
        for (std::uint32_t k = 0; k < n; ++k) {
            std::uint64_t ones = cols.feature[k].count_ones();
            std::uint64_t ones_pos = count_and(cols.feature[k], cols.label);
            violations[2 * k + 1] = m - ones; // literal x[k]=1 violated by zeros
            violations_pos[2 * k + 1] = ypos - ones_pos;
            violations[2 * k + 0] = ones; // literal x[k]=0 violated by ones
            violations_pos[2 * k + 0] = ones_pos;
        }
    }
};

/// Included iff (V1 - eta*V)/(1-2*eta) <= C in count units, i.e.
/// V1 - C <= eta * (V - 2C); the denominator stays positive for eta < 1/2.
bool literal_included(double v, double v1, double threshold_count, double eta_hat) {
    return v1 - threshold_count <= eta_hat * (v - 2.0 * threshold_count);
}

Conjunction candidate_at(const LiteralStats& stats, std::uint32_t n, double threshold_count,
                         double eta_hat) {
    std::vector<Literal> literals;
    for (std::uint32_t k = 0; k < n; ++k)
        for (int b = 0; b < 2; ++b)
            if (literal_included(static_cast<double>(stats.violations[2 * k + b]),
                                 static_cast<double>(stats.violations_pos[2 * k + b]),
                                 threshold_count, eta_hat))
                literals.push_back({k, b == 1});
    return Conjunction::of_collapsing(std::move(literals));
}

} // namespace

Hypothesis cn_conjunction(std::span<const Example> sample, double eta_bound, double eps,
                          double delta) {
    if (sample.empty()) throw invalid_input("cn_conjunction: empty sample");
    if (!(eta_bound >= 0.0 && eta_bound < 0.5))
        throw invalid_input("cn_conjunction: eta bound must be in [0, 1/2)");
    if (!(eps > 0.0 && eps < 1.0)) throw invalid_input("cn_conjunction: eps in (0,1) required");
    if (!(delta > 0.0 && delta < 1.0))
        throw invalid_input("cn_conjunction: delta in (0,1) required");

    const ColumnView cols(sample);
    const std::uint32_t n = cols.n;
    if (n == 0) throw invalid_input("cn_conjunction: zero-dimensional sample");
    const auto m = static_cast<double>(cols.m);
    const LiteralStats stats(cols);
    const double threshold_count = m * eps / (8.0 * static_cast<double>(n));

    if (eta_bound == 0.0)
        return Hypothesis::conj(candidate_at(stats, n, threshold_count, 0.0));

    const double step = (1.0 - 2.0 * eta_bound) * eps / 8.0;

    // Grid points are i*step for i in [0, top], plus eta_bound itself when the
    // grid does not land on it. Indices only; the grid is never materialized.
    const auto top = static_cast<std::uint64_t>(std::floor(eta_bound / step * (1.0 + 1e-12)));
    const bool extra_top = static_cast<double>(top) * step < eta_bound;
    const std::uint64_t last_index = extra_top ? top + 1 : top;
    auto grid_value = [&](std::uint64_t i) {
        return (extra_top && i == top + 1) ? eta_bound : static_cast<double>(i) * step;
    };

    // Smallest grid index whose value is >= x; last_index + 1 when none is.
    auto first_at_or_above = [&](double x) -> std::uint64_t {
        if (x <= 0.0) return 0;
        double raw = std::ceil(x / step);
        std::uint64_t i = raw <= 0.0 ? 0
                          : raw >= static_cast<double>(top) ? top
                                                            : static_cast<std::uint64_t>(raw);
        while (i > 0 && static_cast<double>(i - 1) * step >= x) --i;
        while (i <= top && static_cast<double>(i) * step < x) ++i;
        if (i > top) return (extra_top && eta_bound >= x) ? top + 1 : last_index + 1;
        return i;
    };

    // Each literal's inclusion flips at most once along the grid; cut at the
    // crossings so candidates are constant on each run.
    std::vector<double> cuts;
    for (std::uint32_t l = 0; l < 2 * n; ++l) {
        const auto v = static_cast<double>(stats.violations[l]);
        const auto v1 = static_cast<double>(stats.violations_pos[l]);
        const double denom = v - 2.0 * threshold_count;
        if (denom == 0.0) continue;
        const double at = (v1 - threshold_count) / denom;
        if (at > 0.0 && at <= eta_bound) cuts.push_back(at);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(eta_bound + step); // sentinel past the end of the grid

    struct Best {
        double value = 0.0;
        bool set = false;
        Conjunction conj;
    } best;

    std::map<std::vector<Literal>, std::uint64_t> error_cache;
    auto candidate_error = [&](const Conjunction& c) -> std::uint64_t {
        if (c.is_never()) return cols.label.count_ones(); // predicts all-zero
        auto [it, inserted] = error_cache.try_emplace(c.literals(), 0);
        if (inserted) it->second = cols.disagreements(cols.satisfied(c));
        return it->second;
    };

    auto consider = [&](std::uint64_t index, const Conjunction& c, double err_frac) {
        const double eta_hat = grid_value(index);
        const double corrected = (err_frac - eta_hat) / (1.0 - 2.0 * eta_hat);
        const double value = std::max(0.0, corrected);
        if (!best.set || value < best.value) { // strict: ties keep the earlier eta_hat
            best.set = true;
            best.value = value;
            best.conj = c;
        }
    };

    // Within a run the corrected error is monotone in eta_hat, so its minimum
    // sits at a run end or at the first grid point where it clamps to zero.
    std::uint64_t start = 0;
    for (double cut : cuts) {
        if (start > last_index) break;
        const std::uint64_t next_start = first_at_or_above(cut);
        if (next_start <= start) continue;
        const std::uint64_t lo = start;
        const std::uint64_t hi = std::min(next_start - 1, last_index);
        start = next_start;

        const Conjunction c = candidate_at(stats, n, threshold_count, grid_value(lo));
        const double err_frac = static_cast<double>(candidate_error(c)) / m;

        consider(lo, c, err_frac);
        const std::uint64_t zero_idx = first_at_or_above(err_frac);
        if (zero_idx > lo && zero_idx < hi) consider(zero_idx, c, err_frac);
        if (hi > lo) consider(hi, c, err_frac);
    }

    return Hypothesis::conj(best.conj);
}

double cn_conjunction_sample_size(std::uint32_t n, double eta_bound, double eps, double delta) {
    if (n == 0) throw invalid_input("cn_conjunction_sample_size: n must be positive");
    if (!(eta_bound >= 0.0 && eta_bound < 0.5) || !(eps > 0.0 && eps <= 1.0) ||
        !(delta > 0.0 && delta <= 1.0))
        throw invalid_input("cn_conjunction_sample_size: parameters out of range");
    const double nd = n;
    const double gap = 1.0 - 2.0 * eta_bound;
    return std::ceil(512.0 * nd * nd / (eps * eps * gap * gap) *
                     std::log(16.0 * (nd + 1.0) / delta));
}

CnLearnerHandle conjunction_cn_learner() {
    CnLearnerHandle handle;
    handle.learn = [](std::span<const Example> sample, double eta_bound, double eps,
                      double delta) { return cn_conjunction(sample, eta_bound, eps, delta); };
    handle.sample_size = cn_conjunction_sample_size;
    return handle;
}

DenoiseDetail denoise_reduce_detailed(const MultiDomainSample& sample,
                                      const CnLearnerHandle& cn, double eta_bound, double eps,
                                      double delta, std::uint64_t seed,
                                      const DenoiseOptions& options) {
    sample.validate();
    const std::size_t d = sample.dataset_count();
    const std::size_t m = sample.examples_per_dataset();
    if (m < 2)
        throw invalid_input("denoise_reduce: need m >= 2 (one holdout plus training data)");
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw invalid_input("denoise_reduce: eps and delta must be in (0,1)");

    // Inner accuracy and confidence are both delta/(4d).
    const double inner = delta / (4.0 * static_cast<double>(d));

    SplitMix64 holdout_rng(derive_seed(seed, "holdout"));
    DenoiseDetail detail{Hypothesis::constant(false), {}, {}};
    detail.holdout_index.resize(d);
    for (std::size_t i = 0; i < d; ++i)
        detail.holdout_index[i] = static_cast<std::uint32_t>(holdout_rng.next_below(m));

    detail.relabeled.resize(d);
    std::vector<Example> train;
    train.reserve(m - 1);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& examples = sample.datasets[i].examples;
        const std::uint32_t hold = detail.holdout_index[i];
        train.clear();
        for (std::size_t j = 0; j < m; ++j)
            if (j != hold) train.push_back(examples[j]);
        Hypothesis hi = cn.learn(train, eta_bound, inner, inner);
        detail.relabeled[i] = {examples[hold].x, hi.predict(examples[hold].x)};
    }

    detail.hypothesis = cn.learn(detail.relabeled, options.final_noise_bound, eps, delta / 2.0);
    return detail;
}

Hypothesis denoise_reduce(const MultiDomainSample& sample, const CnLearnerHandle& cn,
                          double eta_bound, double eps, double delta, std::uint64_t seed,
                          const DenoiseOptions& options) {
    return denoise_reduce_detailed(sample, cn, eta_bound, eps, delta, seed, options).hypothesis;
}

GuaranteeSizes proof_faithful_sizes(const CnLearnerHandle& cn, std::uint32_t n, double eta_bound,
                                  double eps, double delta) {
    GuaranteeSizes sizes{};
    sizes.datasets = cn.sample_size(n, 0.0, eps, delta / 2.0);
    const double inner = delta / (4.0 * sizes.datasets);
    sizes.examples_per_dataset = cn.sample_size(n, eta_bound, inner, inner) + 1.0;
    return sizes;
}

} // namespace mdl::massart
