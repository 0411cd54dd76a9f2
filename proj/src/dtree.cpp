#include "mdl/dtree.hpp"

#include "mdl/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace mdl {

Conjunction largest_consistent_conjunction(std::span<const BitVec> positives) {
    if (positives.empty())
        throw invalid_input("largest_consistent_conjunction: empty input");
    const std::size_t n = positives.front().size();
    for (const BitVec& x : positives)
        if (x.size() != n)
            throw invalid_input("largest_consistent_conjunction: mixed dimensions");

    // can1[k]: every input has bit k set; can0[k]: every input has it clear.
    BitVec can1(n, true), can0(n, true);
    const auto& k = kern::active();
    for (const BitVec& x : positives) {
        k.and_inplace(can1.words().data(), x.words().data(), can1.word_count());
        k.andnot_inplace(can0.words().data(), x.words().data(), can0.word_count());
    }

    std::vector<Literal> literals;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (can0.get(i)) literals.push_back({i, false});
        else if (can1.get(i)) literals.push_back({i, true});
    }
    return Conjunction::of(std::move(literals));
}

Hypothesis learn_dt_multidataset(const MultiDomainSample& sample) {
    sample.validate();
    std::vector<Conjunction> members;
    std::vector<BitVec> positives;
    for (std::size_t i = 0; i < sample.datasets.size(); ++i) {
        const Dataset& ds = sample.datasets[i];
        const bool first_label = ds.examples.front().y;
        for (const Example& ex : ds.examples)
            if (ex.y != first_label)
                throw assumption_violation(
                    "learn_dt_multidataset: dataset " + std::to_string(i) +
                    " has mixed labels; input is outside the single-leaf assumption");
        if (!first_label) continue;
        positives.clear();
        positives.reserve(ds.size());
        for (const Example& ex : ds.examples) positives.push_back(ex.x);
        Conjunction c = largest_consistent_conjunction(positives);
        // the same leaf drawn by several datasets produces duplicates
        if (std::find(members.begin(), members.end(), c) == members.end())
            members.push_back(std::move(c));
    }
    return Hypothesis::union_of(std::move(members));
}

double dt_error_bound(std::uint64_t s, std::uint64_t n, std::uint64_t d, std::uint64_t m) {
    if (s < 1 || n < 1 || d < 1 || m < 1)
        throw invalid_input("dt_error_bound: all arguments must be >= 1");
    return static_cast<double>(s) / static_cast<double>(d) +
           2.0 * static_cast<double>(n) / static_cast<double>(m);
}

PoolLearner consistent_conjunction_learner() {
    return [](std::span<const Example> pool) {
        std::vector<BitVec> positives;
        for (const Example& ex : pool)
            if (ex.y) positives.push_back(ex.x);
        if (positives.empty()) return Hypothesis::constant(false);
        return Hypothesis::conj(largest_consistent_conjunction(positives));
    };
}

std::string write_union(const Hypothesis& h) {
    std::ostringstream out;
    for (const Conjunction& c : h.members()) {
        if (c.is_never()) continue;
        if (c.empty()) {
            out << "true\n";
            continue;
        }
        bool first = true;
        for (const Literal& l : c.literals()) {
            if (!first) out << ' ';
            out << (l.value ? '+' : '-') << (l.feature + 1);
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

Hypothesis parse_union(const std::string& text) {
    std::vector<Conjunction> members;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string tok;
        std::vector<Literal> literals;
        bool any = false, is_true = false;
        while (fields >> tok) {
            if (tok[0] == '#') break; // comment to end of line
            any = true;
            if (tok == "true") {
                is_true = true;
                continue;
            }
            if ((tok[0] != '+' && tok[0] != '-') || tok.size() < 2)
                throw invalid_input("parse_union: bad literal '" + tok + "' on line " +
                                    std::to_string(line_no));
            std::uint32_t idx = 0;
            auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || idx == 0)
                throw invalid_input("parse_union: bad literal '" + tok + "' on line " +
                                    std::to_string(line_no));
            literals.push_back({idx - 1, tok[0] == '+'});
        }
        if (!any) continue; // blank or comment line
        if (is_true && !literals.empty())
            throw invalid_input("parse_union: 'true' mixed with literals on line " +
                                std::to_string(line_no));
        members.push_back(is_true ? Conjunction::always()
                                  : Conjunction::of(std::move(literals)));
    }
    return Hypothesis::union_of(std::move(members));
}

} // namespace mdl
