#include "mdl/evaluate.hpp"

namespace mdl {

ErrorCounts error_counts(const Hypothesis& h, std::span<const Example> eval) {
    if (eval.empty()) throw invalid_input("error_rate: empty evaluation stream");
    ErrorCounts counts;
    counts.total = eval.size();
    for (const Example& ex : eval)
        if (h.predict(ex.x) != ex.y) ++counts.wrong;
    return counts;
}

double error_rate(const Hypothesis& h, std::span<const Example> eval) {
    return error_counts(h, eval).rate();
}

double balanced_error_rate(const Hypothesis& h, std::span<const Example> eval) {
    if (eval.empty()) throw invalid_input("balanced_error_rate: empty evaluation stream");
    std::uint64_t n0 = 0, n1 = 0, wrong0 = 0, wrong1 = 0;
    for (const Example& ex : eval) {
        bool wrong = h.predict(ex.x) != ex.y;
        if (ex.y) {
            ++n1;
            wrong1 += wrong;
        } else {
            ++n0;
            wrong0 += wrong;
        }
    }
    if (n0 == 0) throw invalid_input("balanced_error_rate: class 0 absent from stream");
    if (n1 == 0) throw invalid_input("balanced_error_rate: class 1 absent from stream");
    return static_cast<double>(wrong0 * n1 + wrong1 * n0) /
           static_cast<double>(2 * n0 * n1);
}

Hypothesis first_example_baseline(const MultiDomainSample& sample, const PoolLearner& inner) {
    sample.validate();
    std::vector<Example> pool;
    pool.reserve(sample.dataset_count());
    for (const Dataset& ds : sample.datasets) pool.push_back(ds.examples.front());
    return inner(pool);
}

} // namespace mdl
