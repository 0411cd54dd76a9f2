#pragma once

#include <stdexcept>
#include <string>

namespace mdl {

/// Bad arguments or malformed inputs (dimension mismatches, empty streams,
/// out-of-range parameters, parse failures).
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// The data violates the distributional assumption a learner requires
/// (mixed labels inside one dataset under the tree assumption, FUD step 5
/// finding no consistent concept, ...). Benchmarks record these per trial
/// instead of aborting.
class assumption_violation : public std::runtime_error {
public:
    explicit assumption_violation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mdl
