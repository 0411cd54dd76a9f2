#include "mdl/types.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <string>

namespace mdl {

void MultiDomainSample::validate() const {
    if (datasets.empty()) throw invalid_input("MultiDomainSample: at least one dataset required");
    const std::size_t m = datasets.front().size();
    if (m == 0) throw invalid_input("MultiDomainSample: datasets must be nonempty");
    for (const Dataset& ds : datasets) {
        if (ds.size() != m)
            throw invalid_input("MultiDomainSample: datasets must share one size m");
        for (const Example& ex : ds.examples)
            if (ex.x.size() != dimension)
                throw invalid_input("MultiDomainSample: example dimension mismatch");
    }
}

namespace {

std::vector<Literal> normalize(std::vector<Literal> literals, bool* contradictory) {
    std::sort(literals.begin(), literals.end(), [](const Literal& a, const Literal& b) {
        return a.feature != b.feature ? a.feature < b.feature : a.value < b.value;
    });
    literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
    *contradictory = false;
    for (std::size_t i = 1; i < literals.size(); ++i)
        if (literals[i].feature == literals[i - 1].feature) {
            *contradictory = true;
            break;
        }
    return literals;
}

} // namespace

Conjunction Conjunction::of(std::vector<Literal> literals) {
    bool contradictory = false;
    auto norm = normalize(std::move(literals), &contradictory);
    if (contradictory)
        throw invalid_input("Conjunction::of: feature with both polarities; use never()");
    Conjunction c;
    c.literals_ = std::move(norm);
    return c;
}

Conjunction Conjunction::of_collapsing(std::vector<Literal> literals) {
    bool contradictory = false;
    auto norm = normalize(std::move(literals), &contradictory);
    if (contradictory) return never();
    Conjunction c;
    c.literals_ = std::move(norm);
    return c;
}

bool Conjunction::satisfied_by(const BitVec& x) const {
    if (unsat_) return false;
    for (const Literal& l : literals_) {
        if (l.feature >= x.size())
            throw invalid_input("Conjunction: literal index exceeds input dimension");
        if (x.get(l.feature) != l.value) return false;
    }
    return true;
}

std::optional<std::uint32_t> Conjunction::max_feature() const {
    if (literals_.empty()) return std::nullopt;
    return literals_.back().feature;
}

std::string to_text(const Conjunction& c) {
    if (c.is_never()) return "never";
    if (c.empty()) return "true";
    std::string out;
    for (const Literal& l : c.literals()) {
        if (!out.empty()) out += ' ';
        out += l.value ? '+' : '-';
        out += std::to_string(l.feature + 1);
    }
    return out;
}

Conjunction conjunction_from_text(const std::string& text) {
    std::vector<Literal> literals;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    if (text.compare(i, 4, "true") == 0) return Conjunction::always();
    if (text.compare(i, 5, "never") == 0) return Conjunction::never();
    while (i < text.size()) {
        char sign = text[i];
        if (sign != '+' && sign != '-')
            throw invalid_input("conjunction_from_text: expected +/- literal");
        ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw invalid_input("conjunction_from_text: missing index");
        unsigned long idx = std::stoul(text.substr(start, i - start));
        if (idx == 0) throw invalid_input("conjunction_from_text: indices are 1-based");
        literals.push_back({static_cast<std::uint32_t>(idx - 1), sign == '+'});
        skip_ws();
    }
    return Conjunction::of(std::move(literals));
}

DecisionTree DecisionTree::single_leaf(bool label) {
    Node leaf;
    leaf.label = label;
    return from_nodes({leaf}, 0);
}

DecisionTree DecisionTree::from_nodes(std::vector<Node> nodes, std::int32_t root) {
    DecisionTree t;
    t.nodes_ = std::move(nodes);
    t.root_ = root;
    t.build_leaves();
    t.validate();
    return t;
}

bool DecisionTree::evaluate(const BitVec& x) const {
    std::int32_t at = root_;
    for (;;) {
        const Node& node = nodes_.at(static_cast<std::size_t>(at));
        if (node.feature < 0) return node.label;
        if (static_cast<std::size_t>(node.feature) >= x.size())
            throw invalid_input("DecisionTree: feature index exceeds input dimension");
        at = x.get(static_cast<std::size_t>(node.feature)) ? node.child1 : node.child0;
    }
}

void DecisionTree::build_leaves() {
    leaves_.clear();
    std::vector<Literal> path;
    std::function<void(std::int32_t)> walk = [&](std::int32_t at) {
        const Node& node = nodes_.at(static_cast<std::size_t>(at));
        if (node.feature < 0) {
            Leaf leaf;
            leaf.node = at;
            leaf.label = node.label;
            leaf.path = Conjunction::of(path);
            leaves_.push_back(std::move(leaf));
            return;
        }
        path.push_back({static_cast<std::uint32_t>(node.feature), false});
        walk(node.child0);
        path.back().value = true;
        walk(node.child1);
        path.pop_back();
    };
    walk(root_);
}

void DecisionTree::validate() const {
    if (nodes_.empty()) throw invalid_input("DecisionTree: empty node list");
    std::vector<Literal> path;
    std::size_t seen_leaves = 0;
    std::function<void(std::int32_t)> walk = [&](std::int32_t at) {
        if (at < 0 || static_cast<std::size_t>(at) >= nodes_.size())
            throw invalid_input("DecisionTree: child index out of range");
        const Node& node = nodes_[static_cast<std::size_t>(at)];
        if (node.feature < 0) {
            const Leaf& leaf = leaves_.at(seen_leaves++);
            if (leaf.node != at || leaf.label != node.label ||
                leaf.path != Conjunction::of(path))
                throw invalid_input("DecisionTree: stored leaf conjunction does not match path");
            return;
        }
        for (const Literal& l : path)
            if (l.feature == static_cast<std::uint32_t>(node.feature))
                throw invalid_input("DecisionTree: feature repeats along a path");
        path.push_back({static_cast<std::uint32_t>(node.feature), false});
        walk(node.child0);
        path.back().value = true;
        walk(node.child1);
        path.pop_back();
    };
    walk(root_);
    if (seen_leaves != leaves_.size())
        throw invalid_input("DecisionTree: leaf bookkeeping mismatch");
}

} // namespace mdl
