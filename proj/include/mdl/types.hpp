#pragma once

#include "mdl/bitvec.hpp"
#include "mdl/error.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mdl {

/// One labeled example: features in {0,1}^n and a bit label. The latent
/// domain an example was drawn from is deliberately NOT stored here; learners
/// receive only (x, y). Generators report domain tags through a separate
/// side channel for test oracles (see synth::TrainingDraw).
struct Example {
    BitVec x;
    bool y = false;
};

/// m examples drawn from one latent domain.
struct Dataset {
    std::vector<Example> examples;

    std::size_t size() const { return examples.size(); }
};

/// d datasets of m examples each over {0,1}^n.
struct MultiDomainSample {
    std::vector<Dataset> datasets;
    std::uint32_t dimension = 0;

    std::size_t dataset_count() const { return datasets.size(); }
    std::size_t examples_per_dataset() const {
        return datasets.empty() ? 0 : datasets.front().size();
    }

    /// d >= 1, every dataset the same nonempty size, every example dimension n.
    void validate() const;
};

struct Literal {
    std::uint32_t feature = 0; // 0-indexed
    bool value = false;        // satisfied when x[feature] == value

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Conjunction of literals. The empty literal set is satisfied by every
/// point; a contradictory set (both polarities of one feature) cannot be
/// represented literal-by-literal and is instead the explicit `never()`
/// marker, satisfied by nothing.
class Conjunction {
public:
    Conjunction() = default; // always-true

    static Conjunction always() { return Conjunction(); }

    static Conjunction never() {
        Conjunction c;
        c.unsat_ = true;
        return c;
    }

    /// Throws invalid_input if a feature appears with both polarities.
    static Conjunction of(std::vector<Literal> literals);

    /// Like of(), but a contradictory set collapses to never().
    static Conjunction of_collapsing(std::vector<Literal> literals);

    bool is_never() const { return unsat_; }
    bool empty() const { return !unsat_ && literals_.empty(); }
    const std::vector<Literal>& literals() const { return literals_; }

    bool satisfied_by(const BitVec& x) const;

    /// Largest feature index referenced, if any.
    std::optional<std::uint32_t> max_feature() const;

    friend bool operator==(const Conjunction&, const Conjunction&) = default;

private:
    std::vector<Literal> literals_; // sorted by feature, one polarity each
    bool unsat_ = false;
};

/// Signed 1-indexed literal text: "-1 +3" is x[1]=0 AND x[3]=1; "true" is the
/// empty conjunction, "never" the unsatisfiable marker.
std::string to_text(const Conjunction& c);
Conjunction conjunction_from_text(const std::string& text);

/// Rooted binary decision tree over {0,1}^n; internal nodes test one feature,
/// leaves carry a label and the conjunction of their root-to-leaf path.
class DecisionTree {
public:
    struct Node {
        std::int32_t feature = -1; // -1 marks a leaf
        std::int32_t child0 = -1;
        std::int32_t child1 = -1;
        bool label = false; // leaves only
    };

    struct Leaf {
        std::int32_t node = -1;
        bool label = false;
        Conjunction path; // the leaf's domain descriptor
    };

    static DecisionTree single_leaf(bool label);
    static DecisionTree from_nodes(std::vector<Node> nodes, std::int32_t root = 0);

    bool evaluate(const BitVec& x) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    std::int32_t root() const { return root_; }

    /// Leaves in left-to-right order (0-child before 1-child).
    const std::vector<Leaf>& leaves() const { return leaves_; }
    std::size_t leaf_count() const { return leaves_.size(); }

    /// No repeated feature on any path; stored leaf conjunctions equal the
    /// path restrictions.
    void validate() const;

private:
    void build_leaves();

    std::vector<Node> nodes_;
    std::int32_t root_ = 0;
    std::vector<Leaf> leaves_;
};

} // namespace mdl
