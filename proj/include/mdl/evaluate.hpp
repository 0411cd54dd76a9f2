#pragma once

#include "mdl/hypothesis.hpp"
#include "mdl/types.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace mdl {

/// Exact disagreement counts. Rates are formed by one division at the
/// reporting boundary so equal rational values compare bit-equal.
struct ErrorCounts {
    std::uint64_t wrong = 0;
    std::uint64_t total = 0;

    double rate() const { return static_cast<double>(wrong) / static_cast<double>(total); }
};

ErrorCounts error_counts(const Hypothesis& h, std::span<const Example> eval);

/// Fraction of eval examples with predict(h, x) != y. Empty stream is an error.
double error_rate(const Hypothesis& h, std::span<const Example> eval);

/// Mean of the two per-class error rates; computed as
/// (wrong0*n1 + wrong1*n0) / (2*n0*n1) in integers so it equals error_rate
/// bit-exactly on a class-balanced stream. Each class must be present.
double balanced_error_rate(const Hypothesis& h, std::span<const Example> eval);

/// A noiseless-PAC learner over an iid pool.
using PoolLearner = std::function<Hypothesis(std::span<const Example>)>;

/// Trains `inner` on the pool formed by the first example of each dataset.
/// Those firsts are iid draws from the meta-distribution, so plain PAC
/// guarantees carry over.
Hypothesis first_example_baseline(const MultiDomainSample& sample, const PoolLearner& inner);

} // namespace mdl
