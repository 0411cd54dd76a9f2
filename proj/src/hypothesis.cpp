#include "mdl/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mdl {

Hypothesis Hypothesis::constant(bool label) { return Hypothesis(ConstantNode{label}); }

Hypothesis Hypothesis::conj(Conjunction c) { return Hypothesis(ConjNode{std::move(c)}); }

Hypothesis Hypothesis::union_of(std::vector<Conjunction> members) {
    return Hypothesis(UnionNode{std::move(members)});
}

Hypothesis Hypothesis::masked(std::vector<std::uint32_t> features, Hypothesis inner) {
    MaskNode node;
    node.features = std::move(features);
    node.inner = std::make_shared<const Hypothesis>(std::move(inner));
    return Hypothesis(std::move(node));
}

Hypothesis Hypothesis::knn(std::vector<Example> store, std::uint32_t k) {
    if (store.empty()) throw invalid_input("knn: empty sample");
    if (k == 0 || k % 2 == 0) throw invalid_input("knn: k must be odd");
    KnnNode node;
    node.dimension = static_cast<std::uint32_t>(store.front().x.size());
    for (const Example& ex : store)
        if (ex.x.size() != node.dimension) throw invalid_input("knn: mixed dimensions");
    node.store = std::move(store);
    node.k = std::min<std::uint32_t>(k, static_cast<std::uint32_t>(node.store.size()));
    if (node.k % 2 == 0) --node.k; // keep an odd vote when the store is small
    return Hypothesis(std::move(node));
}

Hypothesis Hypothesis::nearest_centroid(std::span<const Example> sample) {
    if (sample.empty()) throw invalid_input("nearest_centroid: empty sample");
    const std::size_t n = sample.front().x.size();
    CentroidNode node;
    node.mean0.assign(n, 0.0);
    node.mean1.assign(n, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (const Example& ex : sample) {
        if (ex.x.size() != n) throw invalid_input("nearest_centroid: mixed dimensions");
        auto& mean = ex.y ? node.mean1 : node.mean0;
        (ex.y ? n1 : n0)++;
        for (std::size_t i = 0; i < n; ++i)
            if (ex.x.get(i)) mean[i] += 1.0;
    }
    if (n0 == 0 || n1 == 0)
        throw invalid_input("nearest_centroid: both classes must be present");
    for (std::size_t i = 0; i < n; ++i) {
        node.mean0[i] /= static_cast<double>(n0);
        node.mean1[i] /= static_cast<double>(n1);
    }
    return Hypothesis(std::move(node));
}

Hypothesis::Kind Hypothesis::kind() const {
    struct Visitor {
        Kind operator()(const ConstantNode& c) const {
            return c.label ? Kind::constant_one : Kind::constant_zero;
        }
        Kind operator()(const ConjNode&) const { return Kind::conjunction; }
        Kind operator()(const UnionNode&) const { return Kind::union_of_conjunctions; }
        Kind operator()(const MaskNode&) const { return Kind::masked; }
        Kind operator()(const KnnNode&) const { return Kind::knn; }
        Kind operator()(const CentroidNode&) const { return Kind::nearest_centroid; }
    };
    return std::visit(Visitor{}, *node_);
}

bool Hypothesis::predict(const BitVec& x) const {
    struct Visitor {
        const BitVec& x;

        bool operator()(const ConstantNode& c) const { return c.label; }

        bool operator()(const ConjNode& node) const {
            check_dim(node.c);
            return node.c.satisfied_by(x);
        }

        bool operator()(const UnionNode& node) const {
            for (const Conjunction& c : node.members) {
                check_dim(c);
                if (c.satisfied_by(x)) return true; // short-circuit on first hit
            }
            return false;
        }

        bool operator()(const MaskNode& node) const {
            BitVec projected(node.features.size());
            for (std::size_t i = 0; i < node.features.size(); ++i) {
                if (node.features[i] >= x.size())
                    throw invalid_input("Hypothesis: mask index exceeds input dimension");
                projected.set(i, x.get(node.features[i]));
            }
            return node.inner->predict(projected);
        }

        bool operator()(const KnnNode& node) const {
            if (x.size() != node.dimension)
                throw invalid_input("Hypothesis: knn dimension mismatch");
            // (distance, index) selection, ties to the earlier index
            std::vector<std::pair<std::uint64_t, std::uint32_t>> order(node.store.size());
            for (std::size_t i = 0; i < node.store.size(); ++i)
                order[i] = {hamming_distance(node.store[i].x, x), static_cast<std::uint32_t>(i)};
            std::partial_sort(order.begin(), order.begin() + node.k, order.end());
            std::uint32_t votes = 0;
            for (std::uint32_t i = 0; i < node.k; ++i)
                votes += node.store[order[i].second].y ? 1 : 0;
            return 2 * votes > node.k;
        }

        bool operator()(const CentroidNode& node) const {
            if (x.size() != node.mean0.size())
                throw invalid_input("Hypothesis: centroid dimension mismatch");
            double d0 = 0.0, d1 = 0.0;
            for (std::size_t i = 0; i < node.mean0.size(); ++i) {
                double xi = x.get(i) ? 1.0 : 0.0;
                d0 += (xi - node.mean0[i]) * (xi - node.mean0[i]);
                d1 += (xi - node.mean1[i]) * (xi - node.mean1[i]);
            }
            return d1 < d0; // tie -> class 0
        }

        void check_dim(const Conjunction& c) const {
            if (auto mx = c.max_feature(); mx && *mx >= x.size())
                throw invalid_input("Hypothesis: conjunction literal exceeds input dimension");
        }
    };
    return std::visit(Visitor{x}, *node_);
}

const Conjunction& Hypothesis::conjunction() const {
    return std::get<ConjNode>(*node_).c;
}

const std::vector<Conjunction>& Hypothesis::members() const {
    return std::get<UnionNode>(*node_).members;
}

const std::vector<std::uint32_t>& Hypothesis::mask() const {
    return std::get<MaskNode>(*node_).features;
}

const Hypothesis& Hypothesis::inner() const {
    return *std::get<MaskNode>(*node_).inner;
}

namespace {

std::string conj_text(const Conjunction& c) {
    if (c.is_never()) return "never";
    if (c.empty()) return "true";
    std::ostringstream out;
    bool first = true;
    for (const Literal& l : c.literals()) {
        if (!first) out << ' ';
        out << (l.value ? '+' : '-') << (l.feature + 1);
        first = false;
    }
    return out.str();
}

} // namespace

std::string Hypothesis::summary() const {
    struct Visitor {
        std::string operator()(const ConstantNode& c) const {
            return c.label ? "const1" : "const0";
        }
        std::string operator()(const ConjNode& node) const {
            return "conj{" + conj_text(node.c) + "}";
        }
        std::string operator()(const UnionNode& node) const {
            return "union[" + std::to_string(node.members.size()) + "]";
        }
        std::string operator()(const MaskNode& node) const {
            return "masked[" + std::to_string(node.features.size()) + "]:" +
                   node.inner->summary();
        }
        std::string operator()(const KnnNode& node) const {
            return "knn(k=" + std::to_string(node.k) + ",m=" +
                   std::to_string(node.store.size()) + ")";
        }
        std::string operator()(const CentroidNode&) const { return "centroid"; }
    };
    return std::visit(Visitor{}, *node_);
}

} // namespace mdl
