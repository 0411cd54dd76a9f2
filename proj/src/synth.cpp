#include "mdl/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace mdl::synth {

namespace {

constexpr double kWeightTol = 1e-9;

void check_weights(const std::vector<double>& w, const char* who) {
    if (w.empty()) throw invalid_input(std::string(who) + ": empty weight vector");
    double sum = 0.0;
    for (double v : w) {
        if (v < 0.0) throw invalid_input(std::string(who) + ": negative weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kWeightTol)
        throw invalid_input(std::string(who) + ": weights must sum to 1");
}

std::vector<double> cumulative(const std::vector<double>& w) {
    std::vector<double> cum(w.size());
    double run = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        run += w[i];
        cum[i] = run;
    }
    return cum;
}

/// Pearson correlation of two binary variables from the exact cell
/// probabilities a=Pr[0,0], b=Pr[0,1], c=Pr[1,0], d=Pr[1,1].
double corr_from_probs(double a, double b, double c, double d) {
    double den = (a + b) * (c + d) * (a + c) * (b + d);
    if (den <= 0.0) return 0.0;
    return (a * d - b * c) / std::sqrt(den);
}

/// XOR-channel parameter q making corr(y XOR Bern(q), y) == rho when
/// Pr[y=1] == pi. Closed form from the contingency table.
double q_from_rho(double rho, double pi) {
    double t = rho / (2.0 * std::sqrt(pi * (1.0 - pi) + rho * rho * (pi - 0.5) * (pi - 0.5)));
    if (!(t >= -1.0 && t <= 1.0))
        throw invalid_input("FsSpec: correlation target infeasible for this label bias");
    return (1.0 - t) / 2.0;
}

double rho_of_xor(double q, double pi) {
    double a = (1.0 - pi) * (1.0 - q);
    double b = pi * q;
    double c = (1.0 - pi) * q;
    double d = pi * (1.0 - q);
    return corr_from_probs(a, b, c, d);
}

/// Marsaglia-Tsang gamma sampler (shape alpha, scale 1).
double gamma_draw(SplitMix64& rng, double alpha) {
    if (alpha < 1.0)
        return gamma_draw(rng, alpha + 1.0) * std::pow(rng.next_double(), 1.0 / alpha);
    double d = alpha - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.next_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.next_double();
        if (u <= 0.0) continue;
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

BitVec draw_uniform_bits(SplitMix64& rng, std::uint32_t n) {
    BitVec x(n);
    auto words = x.words();
    for (std::size_t w = 0; w < words.size(); ++w) words[w] = rng.next_u64();
    if (n & 63) words.back() &= (~0ULL) >> (64 - (n & 63));
    return x;
}

bool all_half(const std::vector<double>& marginal) {
    for (double p : marginal)
        if (p != 0.5) return false;
    return true;
}

} // namespace

void MdmSpec::validate() const {
    if (n == 0) throw invalid_input("MdmSpec: n must be positive");
    if (target.is_never()) throw invalid_input("MdmSpec: target must be satisfiable");
    if (auto mx = target.max_feature(); mx && *mx >= n)
        throw invalid_input("MdmSpec: target literal out of range");
    if (!(eta_bound >= 0.0 && eta_bound < 0.5))
        throw invalid_input("MdmSpec: eta bound must be in [0, 1/2)");
    if (noise.size() != weights.size())
        throw invalid_input("MdmSpec: noise and weights must cover the same domains");
    for (double e : noise)
        if (!(e >= 0.0 && e <= eta_bound))
            throw invalid_input("MdmSpec: every noise rate must lie in [0, eta_bound]");
    check_weights(weights, "MdmSpec");
    if (marginal.size() != n) throw invalid_input("MdmSpec: marginal size must equal n");
    for (double p : marginal)
        if (!(p >= 0.0 && p <= 1.0)) throw invalid_input("MdmSpec: marginal out of [0,1]");
}

void DtSpec::validate() const {
    if (n == 0) throw invalid_input("DtSpec: n must be positive");
    tree.validate();
    for (const auto& leaf : tree.leaves())
        if (auto mx = leaf.path.max_feature(); mx && *mx >= n)
            throw invalid_input("DtSpec: tree feature out of range");
    if (leaf_probs.size() != tree.leaf_count())
        throw invalid_input("DtSpec: one probability per leaf required");
    check_weights(leaf_probs, "DtSpec");
}

FsSpec FsSpec::build(const Params& params) {
    FsSpec spec;
    spec.n = params.n;
    spec.robust = params.robust;
    std::sort(spec.robust.begin(), spec.robust.end());
    spec.beta = params.beta;
    spec.label_bias = params.label_bias;
    spec.neg_flip = params.neg_flip;
    spec.domain_count = params.domain_count;
    spec.weights = params.weights.empty()
                       ? std::vector<double>(params.domain_count, 1.0 / params.domain_count)
                       : params.weights;
    spec.idio_rho_lo = params.idio_rho_lo;
    spec.idio_rho_hi = params.idio_rho_hi;
    spec.idio_zero_frac = params.idio_zero_frac;
    spec.profile_seed = params.profile_seed;

    // Separate streams so the profile is identical whether the target was
    // given explicitly or drawn here (parse always passes it explicitly).
    SplitMix64 rng(derive_seed(spec.profile_seed, "fs-profile"));
    if (params.target.literals().empty() && !spec.robust.empty()) {
        SplitMix64 target_rng(derive_seed(spec.profile_seed, "fs-target"));
        std::vector<Literal> lits;
        for (std::uint32_t k : spec.robust) lits.push_back({k, target_rng.bernoulli(0.5)});
        spec.target = Conjunction::of(std::move(lits));
    } else {
        spec.target = params.target;
    }

    // Idiosyncratic profile: per coordinate, a fixed count of zero-correlation
    // domains, signed strong magnitudes elsewhere.
    spec.idio_coords.clear();
    std::vector<bool> is_robust(spec.n, false);
    for (std::uint32_t k : spec.robust) {
        if (k >= spec.n) throw invalid_input("FsSpec: robust index out of range");
        is_robust[k] = true;
    }
    for (std::uint32_t k = 0; k < spec.n; ++k)
        if (!is_robust[k]) spec.idio_coords.push_back(k);

    const std::uint32_t Z = spec.domain_count;
    const auto zero_count = static_cast<std::uint32_t>(
        std::lround(spec.idio_zero_frac * static_cast<double>(Z)));
    spec.idio_rho.assign(spec.idio_coords.size(), std::vector<double>(Z, 0.0));
    std::vector<std::uint32_t> order(Z);
    for (std::size_t j = 0; j < spec.idio_coords.size(); ++j) {
        std::iota(order.begin(), order.end(), 0);
        for (std::uint32_t i = Z; i > 1; --i) // Fisher-Yates
            std::swap(order[i - 1], order[rng.next_below(i)]);
        for (std::uint32_t zi = zero_count; zi < Z; ++zi) {
            double mag = rng.uniform(spec.idio_rho_lo, spec.idio_rho_hi);
            spec.idio_rho[j][order[zi]] = rng.bernoulli(0.5) ? mag : -mag;
        }
    }

    // Analytic correlations for the robust coordinates, from the conditional
    // construction: y=1 fixes every literal; y=0 flips each with probability
    // neg_flip conditioned on at least one flip.
    const double f = spec.neg_flip;
    const auto K = static_cast<double>(spec.target.literals().size());
    const double keep = 1.0 - f;
    const double q0 = K <= 1.0 ? 0.0
                               : (keep - std::pow(keep, K)) / (1.0 - std::pow(keep, K));
    const double pi = spec.label_bias;
    spec.robust_rho.assign(spec.robust.size(), 0.0);
    for (std::size_t i = 0; i < spec.robust.size(); ++i) {
        const Literal& lit = spec.target.literals()[i];
        // correlation of the raw bit x[k] with y
        double match_rho = corr_from_probs((1.0 - pi) * (1.0 - q0), 0.0,
                                           (1.0 - pi) * q0, pi);
        spec.robust_rho[i] = lit.value ? match_rho : -match_rho;
    }

    // XOR parameters realizing the idiosyncratic targets, checked against the
    // inverse map.
    spec.idio_q.assign(spec.idio_coords.size(), std::vector<double>(Z, 0.5));
    for (std::size_t j = 0; j < spec.idio_coords.size(); ++j)
        for (std::uint32_t z = 0; z < Z; ++z) {
            spec.idio_q[j][z] = q_from_rho(spec.idio_rho[j][z], pi);
            if (std::abs(rho_of_xor(spec.idio_q[j][z], pi) - spec.idio_rho[j][z]) > 1e-9)
                throw invalid_input("FsSpec: correlation inversion failed");
        }

    spec.validate();
    return spec;
}

void FsSpec::validate() const {
    if (n == 0) throw invalid_input("FsSpec: n must be positive");
    if (robust.empty()) throw invalid_input("FsSpec: robust set must be nonempty");
    if (!(beta > 0.0)) throw invalid_input("FsSpec: beta must be positive");
    if (!(label_bias > 0.0 && label_bias < 1.0))
        throw invalid_input("FsSpec: label bias must be in (0,1)");
    if (!(neg_flip > 0.0 && neg_flip <= 1.0))
        throw invalid_input("FsSpec: neg_flip must be in (0,1]");
    if (domain_count == 0) throw invalid_input("FsSpec: at least one domain");
    if (weights.size() != domain_count) throw invalid_input("FsSpec: one weight per domain");
    check_weights(weights, "FsSpec");

    // target literals must cover R* exactly
    if (target.literals().size() != robust.size())
        throw invalid_input("FsSpec: target must have one literal per robust coordinate");
    for (std::size_t i = 0; i < robust.size(); ++i)
        if (target.literals()[i].feature != robust[i])
            throw invalid_input("FsSpec: target literals must sit on the robust set");

    // Correlation clause: |rho_k| > 1.1*beta on R*, identically in every domain.
    for (double r : robust_rho)
        if (!(std::abs(r) > 1.1 * beta))
            throw invalid_input("FsSpec: robust correlation clause violated; "
                                "raise neg_flip or lower beta");

    // Idiosyncrasy clause: Pr_z[|rho^z_k| < 0.9*beta] > 0.1 for every k not in R*.
    for (std::size_t j = 0; j < idio_coords.size(); ++j) {
        double prob_weak = 0.0;
        for (std::uint32_t z = 0; z < domain_count; ++z) {
            double r = idio_rho[j][z];
            if (std::abs(r) < 0.9 * beta) prob_weak += weights[z];
            if (r != 0.0 && !(std::abs(r) >= 1.1 * beta))
                throw invalid_input("FsSpec: strong idiosyncratic magnitude below 1.1*beta");
        }
        if (!(prob_weak > 0.1))
            throw invalid_input("FsSpec: idiosyncrasy clause violated for a coordinate");
    }
}

double FsSpec::true_correlation(std::uint32_t k, std::uint32_t domain) const {
    auto rit = std::lower_bound(robust.begin(), robust.end(), k);
    if (rit != robust.end() && *rit == k)
        return robust_rho[static_cast<std::size_t>(rit - robust.begin())];
    auto iit = std::lower_bound(idio_coords.begin(), idio_coords.end(), k);
    if (iit == idio_coords.end() || *iit != k)
        throw invalid_input("FsSpec: unknown coordinate");
    return idio_rho[static_cast<std::size_t>(iit - idio_coords.begin())][domain];
}

void GeneratorSpec::validate() const {
    std::visit([](const auto& s) { s.validate(); }, dist);
}

std::uint32_t GeneratorSpec::dimension() const {
    return std::visit([](const auto& s) { return s.n; }, dist);
}

namespace {

struct MdmSampler {
    const MdmSpec& spec;
    bool uniform_marginal;

    explicit MdmSampler(const MdmSpec& s) : spec(s), uniform_marginal(all_half(s.marginal)) {}

    BitVec draw_x(SplitMix64& rng) const {
        if (uniform_marginal) return draw_uniform_bits(rng, spec.n);
        BitVec x(spec.n);
        for (std::uint32_t k = 0; k < spec.n; ++k)
            if (rng.bernoulli(spec.marginal[k])) x.set(k, true);
        return x;
    }

    Example draw(SplitMix64& rng, std::uint32_t domain, bool noisy) const {
        Example ex;
        ex.x = draw_x(rng);
        bool truth = spec.target.satisfied_by(ex.x);
        ex.y = noisy ? truth != rng.bernoulli(spec.noise[domain]) : truth;
        return ex;
    }
};

struct DtSampler {
    const DtSpec& spec;

    Example draw(SplitMix64& rng, std::uint32_t leaf_index) const {
        const auto& leaf = spec.tree.leaves()[leaf_index];
        Example ex;
        ex.x = draw_uniform_bits(rng, spec.n);
        for (const Literal& l : leaf.path.literals()) ex.x.set(l.feature, l.value);
        ex.y = leaf.label;
        return ex;
    }
};

struct FsSampler {
    const FsSpec& spec;

    Example draw(SplitMix64& rng, std::uint32_t domain) const {
        Example ex;
        ex.x = BitVec(spec.n);
        ex.y = rng.bernoulli(spec.label_bias);
        const auto& lits = spec.target.literals();
        if (ex.y) {
            for (const Literal& l : lits) ex.x.set(l.feature, l.value);
        } else {
            // flip each literal with probability neg_flip, conditioned on at
            // least one flip so the conjunction is violated
            std::vector<bool> flip(lits.size());
            for (;;) {
                bool any = false;
                for (std::size_t i = 0; i < lits.size(); ++i) {
                    flip[i] = rng.bernoulli(spec.neg_flip);
                    any = any || flip[i];
                }
                if (any) break;
            }
            for (std::size_t i = 0; i < lits.size(); ++i)
                ex.x.set(lits[i].feature, lits[i].value != flip[i]);
        }
        for (std::size_t j = 0; j < spec.idio_coords.size(); ++j) {
            bool bit = ex.y != rng.bernoulli(spec.idio_q[j][domain]);
            ex.x.set(spec.idio_coords[j], bit);
        }
        return ex;
    }
};

} // namespace

TrainingDraw sample_training(const GeneratorSpec& spec, std::uint32_t d, std::uint32_t m,
                             std::uint64_t trial) {
    if (d == 0 || m == 0) throw invalid_input("sample_training: d and m must be positive");
    spec.validate();
    SplitMix64 rng(derive_seed(derive_seed(spec.seed, "train"), trial));

    TrainingDraw draw;
    draw.sample.dimension = spec.dimension();
    draw.sample.datasets.resize(d);
    draw.domains.resize(d);

    if (const auto* mdm = std::get_if<MdmSpec>(&spec.dist)) {
        MdmSampler sampler(*mdm);
        auto cum = cumulative(mdm->weights);
        for (std::uint32_t i = 0; i < d; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains[i] = z;
            auto& ds = draw.sample.datasets[i].examples;
            ds.reserve(m);
            for (std::uint32_t j = 0; j < m; ++j) ds.push_back(sampler.draw(rng, z, true));
        }
    } else if (const auto* dt = std::get_if<DtSpec>(&spec.dist)) {
        DtSampler sampler{*dt};
        auto cum = cumulative(dt->leaf_probs);
        for (std::uint32_t i = 0; i < d; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains[i] = z;
            auto& ds = draw.sample.datasets[i].examples;
            ds.reserve(m);
            for (std::uint32_t j = 0; j < m; ++j) ds.push_back(sampler.draw(rng, z));
        }
    } else {
        const auto& fs = std::get<FsSpec>(spec.dist);
        FsSampler sampler{fs};
        auto cum = cumulative(fs.weights);
        for (std::uint32_t i = 0; i < d; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains[i] = z;
            auto& ds = draw.sample.datasets[i].examples;
            ds.reserve(m);
            for (std::uint32_t j = 0; j < m; ++j) ds.push_back(sampler.draw(rng, z));
        }
    }
    return draw;
}

TestDraw sample_test(const GeneratorSpec& spec, std::uint32_t count, std::uint64_t trial,
                     bool noisy_labels) {
    if (count == 0) throw invalid_input("sample_test: count must be positive");
    spec.validate();
    SplitMix64 rng(derive_seed(derive_seed(spec.seed, "test"), trial));

    TestDraw draw;
    draw.examples.reserve(count);
    draw.domains.reserve(count);

    if (const auto* mdm = std::get_if<MdmSpec>(&spec.dist)) {
        MdmSampler sampler(*mdm);
        auto cum = cumulative(mdm->weights);
        for (std::uint32_t i = 0; i < count; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains.push_back(z);
            draw.examples.push_back(sampler.draw(rng, z, noisy_labels));
        }
    } else if (const auto* dt = std::get_if<DtSpec>(&spec.dist)) {
        DtSampler sampler{*dt};
        auto cum = cumulative(dt->leaf_probs);
        for (std::uint32_t i = 0; i < count; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains.push_back(z);
            draw.examples.push_back(sampler.draw(rng, z));
        }
    } else {
        const auto& fs = std::get<FsSpec>(spec.dist);
        FsSampler sampler{fs};
        auto cum = cumulative(fs.weights);
        for (std::uint32_t i = 0; i < count; ++i) {
            auto z = static_cast<std::uint32_t>(draw_categorical(rng, cum));
            draw.domains.push_back(z);
            draw.examples.push_back(sampler.draw(rng, z));
        }
    }
    return draw;
}

namespace {

std::uint64_t leaf_capacity(std::size_t features, std::uint32_t cap) {
    if (features >= 32) return cap;
    return std::min<std::uint64_t>(cap, 1ULL << features);
}

} // namespace

GeneratorSpec random_dtspec(std::uint64_t seed, std::uint32_t n, std::uint32_t s, double skew) {
    if (n == 0 || s == 0) throw invalid_input("random_dtspec: n and s must be positive");
    if (!(skew > 0.0)) throw invalid_input("random_dtspec: skew must be positive");
    if (leaf_capacity(n, s) < s)
        throw invalid_input("random_dtspec: " + std::to_string(s) +
                            " leaves are not realizable with " + std::to_string(n) +
                            " features");

    SplitMix64 rng(derive_seed(seed, "dtspec"));
    std::vector<DecisionTree::Node> nodes;
    std::vector<std::int32_t> leaf_nodes; // left-to-right
    std::vector<std::uint32_t> avail(n);
    std::iota(avail.begin(), avail.end(), 0);

    // uniform split sizes subject to each side staying realizable
    std::function<std::int32_t(std::uint32_t)> build = [&](std::uint32_t leaves) {
        if (leaves == 1) {
            nodes.push_back({});
            leaf_nodes.push_back(static_cast<std::int32_t>(nodes.size() - 1));
            return static_cast<std::int32_t>(nodes.size() - 1);
        }
        std::size_t pick = rng.next_below(avail.size());
        std::uint32_t feature = avail[pick];
        std::swap(avail[pick], avail.back());
        avail.pop_back();

        std::uint64_t cap = leaf_capacity(avail.size(), s);
        std::uint32_t hi = static_cast<std::uint32_t>(std::min<std::uint64_t>(leaves - 1, cap));
        std::uint32_t lo = leaves - hi; // leaves-left >= leaves - cap(right)
        std::uint32_t left = lo + static_cast<std::uint32_t>(rng.next_below(hi - lo + 1));

        std::int32_t child0 = build(left);
        std::int32_t child1 = build(leaves - left);
        avail.push_back(feature);

        DecisionTree::Node node;
        node.feature = static_cast<std::int32_t>(feature);
        node.child0 = child0;
        node.child1 = child1;
        nodes.push_back(node);
        return static_cast<std::int32_t>(nodes.size() - 1);
    };
    std::int32_t root = build(s);

    for (std::int32_t idx : leaf_nodes)
        nodes[static_cast<std::size_t>(idx)].label = rng.bernoulli(0.5);
    if (s >= 2) {
        bool all_same = true;
        for (std::int32_t idx : leaf_nodes)
            if (nodes[static_cast<std::size_t>(idx)].label !=
                nodes[static_cast<std::size_t>(leaf_nodes[0])].label)
                all_same = false;
        if (all_same) {
            std::int32_t flip = leaf_nodes[rng.next_below(leaf_nodes.size())];
            nodes[static_cast<std::size_t>(flip)].label =
                !nodes[static_cast<std::size_t>(flip)].label;
        }
    }

    DtSpec dt;
    dt.n = n;
    dt.tree = DecisionTree::from_nodes(std::move(nodes), root);
    dt.leaf_probs.resize(s);
    double total = 0.0;
    for (double& p : dt.leaf_probs) {
        p = gamma_draw(rng, skew);
        total += p;
    }
    for (double& p : dt.leaf_probs) p /= total;

    GeneratorSpec spec;
    spec.dist = std::move(dt);
    spec.seed = seed;
    spec.validate();
    return spec;
}

std::string write_tree(const DecisionTree& tree) {
    std::ostringstream out;
    std::function<void(std::int32_t)> walk = [&](std::int32_t at) {
        const auto& node = tree.nodes()[static_cast<std::size_t>(at)];
        if (node.feature < 0) {
            out << (node.label ? '1' : '0');
            return;
        }
        out << '(' << (node.feature + 1) << ' ';
        walk(node.child0);
        out << ' ';
        walk(node.child1);
        out << ')';
    };
    walk(tree.root());
    return out.str();
}

DecisionTree parse_tree(const std::string& text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& why) -> invalid_input {
        return invalid_input("parse_tree: " + why + " at offset " + std::to_string(pos));
    };
    std::vector<DecisionTree::Node> nodes;
    std::function<std::int32_t()> parse_node = [&]() -> std::int32_t {
        skip_ws();
        if (pos >= text.size()) throw fail("unexpected end");
        if (text[pos] == '0' || text[pos] == '1') {
            DecisionTree::Node leaf;
            leaf.label = text[pos] == '1';
            ++pos;
            nodes.push_back(leaf);
            return static_cast<std::int32_t>(nodes.size() - 1);
        }
        if (text[pos] != '(') throw fail("expected leaf or '('");
        ++pos;
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw fail("expected feature index");
        unsigned long feat = std::stoul(text.substr(start, pos - start));
        if (feat == 0) throw fail("feature indices are 1-based");
        std::int32_t child0 = parse_node();
        std::int32_t child1 = parse_node();
        skip_ws();
        if (pos >= text.size() || text[pos] != ')') throw fail("expected ')'");
        ++pos;
        DecisionTree::Node node;
        node.feature = static_cast<std::int32_t>(feat - 1);
        node.child0 = child0;
        node.child1 = child1;
        nodes.push_back(node);
        return static_cast<std::int32_t>(nodes.size() - 1);
    };
    std::int32_t root = parse_node();
    skip_ws();
    if (pos != text.size()) throw fail("trailing characters");
    return DecisionTree::from_nodes(std::move(nodes), root);
}

Config write_spec(const GeneratorSpec& spec) {
    Config cfg;
    cfg.set("seed", spec.seed);
    if (const auto* mdm = std::get_if<MdmSpec>(&spec.dist)) {
        cfg.set("kind", "mdm");
        cfg.set("n", std::uint64_t(mdm->n));
        cfg.set("target", to_text(mdm->target));
        cfg.set("eta_bound", mdm->eta_bound);
        cfg.set("noise", mdm->noise);
        cfg.set("weights", mdm->weights);
        cfg.set("marginal", mdm->marginal);
    } else if (const auto* dt = std::get_if<DtSpec>(&spec.dist)) {
        cfg.set("kind", "dt");
        cfg.set("n", std::uint64_t(dt->n));
        cfg.set("tree", write_tree(dt->tree));
        cfg.set("leaf_probs", dt->leaf_probs);
    } else {
        const auto& fs = std::get<FsSpec>(spec.dist);
        cfg.set("kind", "fs");
        cfg.set("n", std::uint64_t(fs.n));
        std::vector<std::uint32_t> robust1;
        for (std::uint32_t k : fs.robust) robust1.push_back(k + 1);
        cfg.set("robust", robust1);
        cfg.set("target", to_text(fs.target));
        cfg.set("beta", fs.beta);
        cfg.set("label_bias", fs.label_bias);
        cfg.set("neg_flip", fs.neg_flip);
        cfg.set("domains", std::uint64_t(fs.domain_count));
        cfg.set("weights", fs.weights);
        cfg.set("idio_rho_lo", fs.idio_rho_lo);
        cfg.set("idio_rho_hi", fs.idio_rho_hi);
        cfg.set("idio_zero_frac", fs.idio_zero_frac);
        cfg.set("profile_seed", fs.profile_seed);
    }
    return cfg;
}

GeneratorSpec parse_spec(const Config& cfg) {
    GeneratorSpec spec;
    spec.seed = cfg.get_uint("seed");
    std::string kind = cfg.get_string("kind");
    if (kind == "mdm") {
        MdmSpec mdm;
        mdm.n = static_cast<std::uint32_t>(cfg.get_uint("n"));
        mdm.target = conjunction_from_text(cfg.get_string("target"));
        mdm.eta_bound = cfg.get_double("eta_bound");
        mdm.noise = cfg.get_doubles("noise");
        mdm.weights = cfg.get_doubles("weights");
        mdm.marginal = cfg.get_doubles("marginal");
        spec.dist = std::move(mdm);
    } else if (kind == "dt") {
        DtSpec dt;
        dt.n = static_cast<std::uint32_t>(cfg.get_uint("n"));
        dt.tree = parse_tree(cfg.get_string("tree"));
        dt.leaf_probs = cfg.get_doubles("leaf_probs");
        spec.dist = std::move(dt);
    } else if (kind == "fs") {
        FsSpec::Params params;
        params.n = static_cast<std::uint32_t>(cfg.get_uint("n"));
        for (std::uint32_t k : cfg.get_uints("robust")) {
            if (k == 0) throw invalid_input("parse_spec: robust indices are 1-based");
            params.robust.push_back(k - 1);
        }
        params.target = conjunction_from_text(cfg.get_string("target"));
        params.beta = cfg.get_double("beta");
        params.label_bias = cfg.get_double("label_bias");
        params.neg_flip = cfg.get_double("neg_flip");
        params.domain_count = static_cast<std::uint32_t>(cfg.get_uint("domains"));
        params.weights = cfg.get_doubles("weights");
        params.idio_rho_lo = cfg.get_double("idio_rho_lo");
        params.idio_rho_hi = cfg.get_double("idio_rho_hi");
        params.idio_zero_frac = cfg.get_double("idio_zero_frac");
        params.profile_seed = cfg.get_uint("profile_seed");
        spec.dist = FsSpec::build(params);
    } else {
        throw invalid_input("parse_spec: unknown kind '" + kind + "'");
    }
    spec.validate();
    return spec;
}

} // namespace mdl::synth
