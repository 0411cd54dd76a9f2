#pragma once

#include "mdl/evaluate.hpp"
#include "mdl/hypothesis.hpp"
#include "mdl/types.hpp"

#include <span>
#include <string>

namespace mdl {

/// Conjunction of every literal x[k]=b that holds in ALL inputs, i.e. the
/// literals on exactly the coordinates where the inputs agree. Largest by
/// literal count, minimal by positive region: it never fires on a point that
/// noiseless positive data has not justified.
Conjunction largest_consistent_conjunction(std::span<const BitVec> positives);

/// The multi-dataset tree learner: datasets whose first label is 1 each
/// contribute their largest consistent conjunction; the output is the union.
/// No positive datasets yields the empty union (constant 0). A dataset with
/// mixed labels is outside the assumption and raises assumption_violation.
Hypothesis learn_dt_multidataset(const MultiDomainSample& sample);

/// Expected-error bound s/d + 2n/m for the learner above.
double dt_error_bound(std::uint64_t s, std::uint64_t n, std::uint64_t d, std::uint64_t m);

/// Positives-only conjunction learner usable as a noiseless-PAC pool learner:
/// Conj(LCC(positives)), or constant 0 when the pool has no positives.
PoolLearner consistent_conjunction_learner();

// Text form of a union-of-conjunctions hypothesis: one conjunction per line
// as signed 1-indexed literals ("-1 +3" is x[1]=0 AND x[3]=1), "true" for the
// empty conjunction; '#' lines and blank lines are ignored. Members equal to
// never() are dropped (they contribute nothing to a union).
std::string write_union(const Hypothesis& h);
Hypothesis parse_union(const std::string& text);

} // namespace mdl
