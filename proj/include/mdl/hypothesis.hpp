#pragma once

#include "mdl/types.hpp"

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace mdl {

/// A learned classifier. Immutable once built; prediction is pure, so
/// hypotheses can be shared across threads freely.
class Hypothesis {
public:
    enum class Kind {
        constant_zero,
        constant_one,
        conjunction,
        union_of_conjunctions,
        masked,
        knn,
        nearest_centroid,
    };

    static Hypothesis constant(bool label);
    static Hypothesis conj(Conjunction c);
    static Hypothesis union_of(std::vector<Conjunction> members);

    /// Applies `inner` (over {0,1}^|features|) to x projected onto the given
    /// feature indices, in the order listed.
    static Hypothesis masked(std::vector<std::uint32_t> features, Hypothesis inner);

    /// Majority label among the k Hamming-nearest stored examples; distance
    /// ties break toward the earlier stored index. k must be odd.
    static Hypothesis knn(std::vector<Example> store, std::uint32_t k);

    /// Nearest per-class mean in Euclidean distance, ties to class 0.
    /// Requires both classes present.
    static Hypothesis nearest_centroid(std::span<const Example> sample);

    Kind kind() const;

    bool predict(const BitVec& x) const;

    // Accessors for the variants that carry structure.
    const Conjunction& conjunction() const;
    const std::vector<Conjunction>& members() const;
    const std::vector<std::uint32_t>& mask() const;
    const Hypothesis& inner() const;

    /// Short human-readable form for reports.
    std::string summary() const;

private:
    struct ConstantNode { bool label; };
    struct ConjNode { Conjunction c; };
    struct UnionNode { std::vector<Conjunction> members; };
    struct MaskNode {
        std::vector<std::uint32_t> features;
        std::shared_ptr<const Hypothesis> inner;
    };
    struct KnnNode {
        std::vector<Example> store;
        std::uint32_t k;
        std::uint32_t dimension;
    };
    struct CentroidNode {
        std::vector<double> mean0, mean1;
    };

    using Node = std::variant<ConstantNode, ConjNode, UnionNode, MaskNode, KnnNode, CentroidNode>;

    explicit Hypothesis(Node node) : node_(std::make_shared<Node>(std::move(node))) {}

    std::shared_ptr<const Node> node_;
};

} // namespace mdl
