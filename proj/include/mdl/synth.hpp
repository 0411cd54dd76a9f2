#pragma once

#include "mdl/config.hpp"
#include "mdl/rng.hpp"
#include "mdl/types.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace mdl::synth {

/// Multi-domain classification-noise family: one target conjunction, a
/// per-domain label-flip rate bounded away from 1/2, iid product marginals.
struct MdmSpec {
    std::uint32_t n = 0;
    Conjunction target;
    double eta_bound = 0.0;       // max admissible rate, < 1/2
    std::vector<double> noise;    // rate per domain, each <= eta_bound
    std::vector<double> weights;  // domain draw probabilities
    std::vector<double> marginal; // Bernoulli parameter per coordinate

    void validate() const;
};

/// Single-leaf-per-dataset tree family: a dataset's domain is one leaf of the
/// target tree; examples fix the leaf's path literals, free coordinates are
/// uniform, labels are noiseless.
struct DtSpec {
    std::uint32_t n = 0;
    DecisionTree tree;
    std::vector<double> leaf_probs; // by tree.leaves() order, sums to 1

    void validate() const;
};

/// Feature-selection family: a robust coordinate set R*, a target conjunction
/// whose literals cover R* exactly, labels y = c(x[R*]) noiseless with
/// Pr[y=1] = label_bias. x[R*] is independent of the domain; coordinates
/// outside R* are y XOR Bernoulli(q) with a per-(coordinate, domain) q chosen
/// analytically so the binary Pearson correlation hits its target. Targets:
/// a fixed fraction of domains per coordinate get correlation 0, the rest get
/// a signed magnitude in [idio_rho_lo, idio_rho_hi]. build() derives the
/// profile from profile_seed and verifies every assumption clause by analytic
/// computation of each domain's correlations.
struct FsSpec {
    std::uint32_t n = 0;
    std::vector<std::uint32_t> robust; // R*, sorted original indices
    Conjunction target;                // literals exactly on R*
    double beta = 0.0;
    double label_bias = 0.5;  // Pr[y=1]
    double neg_flip = 0.5;    // per-literal flip probability in the y=0 draw
    std::uint32_t domain_count = 0;
    std::vector<double> weights;
    double idio_rho_lo = 0.0, idio_rho_hi = 0.0;
    double idio_zero_frac = 0.3;
    std::uint64_t profile_seed = 0;

    // Derived in build(); reconstructed deterministically on parse.
    std::vector<double> robust_rho;              // analytic, signed by polarity
    std::vector<std::uint32_t> idio_coords;      // complement of R*
    std::vector<std::vector<double>> idio_rho;   // [idio coord][domain] target
    std::vector<std::vector<double>> idio_q;     // matching XOR parameters

    struct Params {
        std::uint32_t n = 0;
        std::vector<std::uint32_t> robust;
        Conjunction target; // empty -> random polarities over `robust`
        double beta = 0.2;
        double label_bias = 0.5;
        double neg_flip = 0.5;
        std::uint32_t domain_count = 10;
        std::vector<double> weights; // empty -> uniform
        double idio_rho_lo = 0.5, idio_rho_hi = 0.8;
        double idio_zero_frac = 0.3;
        std::uint64_t profile_seed = 0;
    };

    static FsSpec build(const Params& params);
    void validate() const;

    /// Analytic correlation of coordinate k with the label (domain-independent
    /// for robust coordinates; per-domain for the rest).
    double true_correlation(std::uint32_t k, std::uint32_t domain) const;
};

struct GeneratorSpec {
    std::variant<MdmSpec, DtSpec, FsSpec> dist;
    std::uint64_t seed = 0;

    void validate() const;
    std::uint32_t dimension() const;
};

/// A generated training object plus the latent domain tag of each dataset.
/// The tags live outside MultiDomainSample on purpose: learners receive the
/// sample only, oracles in tests read the tags.
struct TrainingDraw {
    MultiDomainSample sample;
    std::vector<std::uint32_t> domains; // one per dataset
};

struct TestDraw {
    std::vector<Example> examples;
    std::vector<std::uint32_t> domains; // one per example
};

/// d datasets of m examples; each dataset draws one domain, then samples
/// conditionally. Deterministic in (spec, seed, trial, d, m).
TrainingDraw sample_training(const GeneratorSpec& spec, std::uint32_t d, std::uint32_t m,
                             std::uint64_t trial = 0);

/// count iid examples, each with its own fresh domain. Labels are the true
/// concept labels; noisy_labels=true instead applies the MDM flip so the
/// stream measures err against the observed label distribution.
TestDraw sample_test(const GeneratorSpec& spec, std::uint32_t count, std::uint64_t trial = 0,
                     bool noisy_labels = false);

/// Random tree instance with exactly s leaves: uniform split sizes, distinct
/// features along each path, random leaf labels (both classes present for
/// s >= 2), symmetric-Dirichlet(skew) leaf probabilities.
GeneratorSpec random_dtspec(std::uint64_t seed, std::uint32_t n, std::uint32_t s, double skew);

// Key-value serialization; round-trips losslessly.
Config write_spec(const GeneratorSpec& spec);
GeneratorSpec parse_spec(const Config& cfg);

// Tree text grammar used in spec files (1-indexed features, 0-child first):
//   node := '0' | '1' | '(' feature node node ')'
std::string write_tree(const DecisionTree& tree);
DecisionTree parse_tree(const std::string& text);

} // namespace mdl::synth
