#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdl/dtree.hpp"
#include "mdl/evaluate.hpp"
#include "mdl/featsel.hpp"
#include "mdl/rng.hpp"
#include "mdl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace mdl;
using namespace mdl::featsel;

namespace {

Example ex(std::string_view bits, bool y) { return {BitVec::parse(bits), y}; }

std::vector<std::pair<bool, bool>> pairs_from(std::initializer_list<std::pair<int, int>> raw) {
    std::vector<std::pair<bool, bool>> out;
    for (auto [r, s] : raw) out.push_back({r != 0, s != 0});
    return out;
}

/// Independent oracle: covariance over the product of standard deviations.
double covariance_form(const PairCounts& c) {
    const double n = static_cast<double>(c.total());
    const double mr = static_cast<double>(c.n10 + c.n11) / n;
    const double ms = static_cast<double>(c.n01 + c.n11) / n;
    const double mrs = static_cast<double>(c.n11) / n;
    return (mrs - mr * ms) / (std::sqrt(mr * (1 - mr)) * std::sqrt(ms * (1 - ms)));
}

} // namespace

TEST_CASE("binary correlation on the cornerstone tables") {
    auto perfect = pairs_from({{0, 0}, {1, 1}, {0, 0}, {1, 1}});
    CHECK(*binary_correlation(perfect) == doctest::Approx(1.0).epsilon(1e-15));

    auto opposite = pairs_from({{0, 1}, {1, 0}});
    CHECK(*binary_correlation(opposite) == doctest::Approx(-1.0).epsilon(1e-15));

    auto independent = pairs_from({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(*binary_correlation(independent) == 0.0);

    PairCounts skewed{4, 1, 1, 4}; // frequencies 0.4, 0.1, 0.1, 0.4
    CHECK(*binary_correlation(skewed) == doctest::Approx(0.6).epsilon(1e-12));

    PairCounts constant_r{3, 2, 0, 0};
    CHECK(!binary_correlation(constant_r).has_value());
    CHECK_THROWS_AS(binary_correlation(PairCounts{}), invalid_input);
}

TEST_CASE("binary correlation agrees with the covariance form to 1e-12") {
    SplitMix64 rng(8);
    for (int t = 0; t < 2000; ++t) {
        PairCounts c{1 + rng.next_below(60), 1 + rng.next_below(60), 1 + rng.next_below(60),
                     1 + rng.next_below(60)};
        auto rho = binary_correlation(c);
        REQUIRE(rho.has_value());
        CHECK(std::abs(*rho - covariance_form(c)) <= 1e-12);
    }
}

TEST_CASE("flipping one variable negates the correlation exactly") {
    SplitMix64 rng(9);
    for (int t = 0; t < 500; ++t) {
        PairCounts c{1 + rng.next_below(40), 1 + rng.next_below(40), 1 + rng.next_below(40),
                     1 + rng.next_below(40)};
        PairCounts flip_r{c.n10, c.n11, c.n00, c.n01};
        CHECK(*binary_correlation(flip_r) == -*binary_correlation(c)); // bit-exact
        PairCounts flip_both{c.n11, c.n10, c.n01, c.n00};
        CHECK(*binary_correlation(flip_both) == *binary_correlation(c));
    }
}

TEST_CASE("the concentration-lemma sample bound and its scalings") {
    CHECK(lemma1_sample_bound(0.5, 0.5, 0.1) == 574361);
    const double base = lemma1_sample_bound_raw(0.5, 0.5, 0.1);
    CHECK(lemma1_sample_bound_raw(0.25, 0.5, 0.1) / base == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(lemma1_sample_bound_raw(0.5, 0.25, 0.1) / base == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(lemma1_sample_bound(0.0, 0.5, 0.1), invalid_input);
    CHECK_THROWS_AS(lemma1_sample_bound(0.5, 0.6, 0.1), invalid_input);
    CHECK_THROWS_AS(lemma1_sample_bound(0.5, 0.5, 1.5), invalid_input);
}

TEST_CASE("correlation tables mark degenerate cells undefined") {
    MultiDomainSample sample;
    sample.dimension = 3;
    // bit 0 constant; bit 1 equals the label; bit 2 anti-equal
    sample.datasets = {Dataset{{ex("101", false), ex("110", true), ex("101", false),
                                ex("110", true)}}};
    CorrelationTable table = correlation_table(sample);
    REQUIRE(table.datasets == 1);
    CHECK(!table.defined(0, 0));
    CHECK(table.defined(0, 1));
    CHECK(table.at(0, 1) == doctest::Approx(1.0));
    CHECK(table.defined(0, 2));
    CHECK(table.at(0, 2) == doctest::Approx(-1.0));

    std::string csv = correlation_table_csv(table);
    CHECK(csv.find("f2") != std::string::npos);
    CHECK(csv.find(",,") != std::string::npos); // the undefined cell stays empty
}

TEST_CASE("generated feature-selection data matches its analytic table") {
    synth::FsSpec::Params params;
    params.n = 10;
    params.robust = {0, 5};
    params.beta = 0.2;
    params.domain_count = 3;
    params.profile_seed = 21;
    synth::FsSpec fs = synth::FsSpec::build(params);
    synth::GeneratorSpec spec;
    spec.dist = fs;
    spec.seed = 99;
    auto draw = synth::sample_training(spec, 6, 50000);
    CorrelationTable table = correlation_table(draw.sample);
    for (std::uint32_t i = 0; i < table.datasets; ++i)
        for (std::uint32_t k = 0; k < table.features; ++k) {
            REQUIRE(table.defined(i, k));
            CHECK(std::abs(table.at(i, k) - fs.true_correlation(k, draw.domains[i])) <= 0.02);
        }
}

TEST_CASE("the min-rule keeps exactly the features above threshold everywhere") {
    CorrelationTable table;
    table.datasets = 3;
    table.features = 2;
    table.rho = {0.5, 0.5, 0.4, 0.1, 0.35, 0.6};
    table.is_def.assign(6, 1);
    auto kept = robust_features(table, 0.3);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0] == 0); // {0.5, 0.4, 0.35} clears 0.3; {0.5, 0.1, 0.6} does not

    table.is_def[0] = 0; // an undefined cell counts as zero and fails the rule
    CHECK(robust_features(table, 0.3).empty());
}

TEST_CASE("class-imbalance short-circuits the selection") {
    MultiDomainSample zeros;
    zeros.dimension = 2;
    zeros.datasets = {Dataset{{ex("01", false), ex("10", false)}},
                      Dataset{{ex("11", false), ex("00", false)}}};
    Hypothesis h = fud(zeros, ConceptClass::conjunctions(), 0.2, 0.1);
    CHECK(h.kind() == Hypothesis::Kind::constant_zero);

    MultiDomainSample ones = zeros;
    for (auto& ds : ones.datasets)
        for (auto& e : ds.examples) e.y = true;
    CHECK(fud(ones, ConceptClass::conjunctions(), 0.2, 0.1).kind() ==
          Hypothesis::Kind::constant_one);
}

TEST_CASE("inconsistent data raises FAIL") {
    MultiDomainSample sample;
    sample.dimension = 1;
    sample.datasets = {Dataset{{ex("0", true), ex("0", false)}}};
    CHECK_THROWS_AS(fud(sample, ConceptClass::conjunctions(), 0.2, 0.1),
                    assumption_violation);
}

TEST_CASE("selection recovers the robust set and reduces to masked learning") {
    synth::FsSpec::Params params;
    params.n = 20;
    params.robust = {2, 9, 14};
    params.beta = 0.2;
    params.domain_count = 6;
    params.profile_seed = 5;
    synth::FsSpec fs = synth::FsSpec::build(params);
    synth::GeneratorSpec spec;
    spec.dist = fs;
    spec.seed = 31;
    auto draw = synth::sample_training(spec, 12, 1500);

    Hypothesis h = fud(draw.sample, ConceptClass::conjunctions(), 0.2, 0.1);
    REQUIRE(h.kind() == Hypothesis::Kind::masked);
    CHECK(h.mask() == fs.robust);

    // masked selection equals the step-5 learner run on pre-masked data
    std::vector<BitVec> positives;
    std::vector<Example> projected;
    for (const Dataset& ds : draw.sample.datasets)
        for (const Example& e : ds.examples) {
            Example p;
            p.x = BitVec(h.mask().size());
            for (std::size_t i = 0; i < h.mask().size(); ++i)
                p.x.set(i, e.x.get(h.mask()[i]));
            p.y = e.y;
            if (p.y) positives.push_back(p.x);
            projected.push_back(std::move(p));
        }
    Hypothesis direct = Hypothesis::conj(largest_consistent_conjunction(positives));
    auto test = synth::sample_test(spec, 4000);
    for (const Example& e : test.examples) {
        BitVec p(h.mask().size());
        for (std::size_t i = 0; i < h.mask().size(); ++i) p.set(i, e.x.get(h.mask()[i]));
        REQUIRE(h.predict(e.x) == direct.predict(p));
    }
    CHECK(error_rate(h, test.examples) <= 0.05);
}

TEST_CASE("regularized scores penalize cross-domain variance") {
    CorrelationTable table;
    table.datasets = 4;
    table.features = 3;
    // feature 0: stable 0.3; feature 1: {0.4, 0, 0.4, 0}; feature 2: constant -0.2
    table.rho = {0.3, 0.4, -0.2, 0.3, 0.0, -0.2, 0.3, 0.4, -0.2, 0.3, 0.0, -0.2};
    table.is_def.assign(12, 1);
    std::vector<double> pooled = {0.3, 0.2, -0.2};

    auto plain = fsus_scores(table, pooled, 0.0);
    CHECK(plain[0] == doctest::Approx(0.3));
    CHECK(plain[1] == doctest::Approx(0.2));
    CHECK(plain[2] == doctest::Approx(0.2));

    auto scores = fsus_scores(table, pooled, 2.0);
    CHECK(scores[0] == doctest::Approx(0.3));  // stdev 0 keeps the pooled value
    CHECK(scores[1] == doctest::Approx(-0.2)); // 0.2 - 2 * 0.2
    CHECK(scores[2] == doctest::Approx(0.2));
}

TEST_CASE("alpha zero ranks exactly like the pooled baseline") {
    SplitMix64 rng(44);
    for (int t = 0; t < 30; ++t) {
        CorrelationTable table;
        table.datasets = 3;
        table.features = 8;
        table.rho.resize(24);
        table.is_def.assign(24, 1);
        for (double& v : table.rho) v = 2.0 * rng.next_double() - 1.0;
        std::vector<double> pooled(8);
        for (double& v : pooled) v = 2.0 * rng.next_double() - 1.0;

        auto scores = fsus_scores(table, pooled, 0.0);
        std::vector<double> absolute(8);
        for (int k = 0; k < 8; ++k) absolute[k] = std::abs(pooled[k]);
        CHECK(select_top(scores, 8) == select_top(absolute, 8));
        for (std::uint32_t count = 1; count <= 8; ++count)
            CHECK(select_top(scores, count) == select_top(absolute, count));
    }
}

TEST_CASE("top-count selection and its tie and permutation behavior") {
    std::vector<double> scores = {0.9, 0.1, 0.9};
    CHECK(select_top(scores, 2) == std::vector<std::uint32_t>{0, 2});
    CHECK(select_top(scores, 3) == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(select_top(std::vector<double>{0.2, 0.7, 0.3}, 1) ==
          std::vector<std::uint32_t>{1});
    CHECK_THROWS_AS(select_top(scores, 0), invalid_input);
    CHECK_THROWS_AS(select_top(scores, 4), invalid_input);

    // distinct scores: permuting features permutes the selection
    SplitMix64 rng(55);
    std::vector<double> distinct(10);
    for (std::size_t i = 0; i < distinct.size(); ++i)
        distinct[i] = static_cast<double>(i) + rng.next_double() * 0.5;
    std::vector<std::uint32_t> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i)
        std::swap(perm[i - 1], perm[rng.next_below(i)]);
    std::vector<double> permuted(10);
    for (std::size_t i = 0; i < 10; ++i) permuted[perm[i]] = distinct[i];
    auto base = select_top(distinct, 4);
    auto moved = select_top(permuted, 4);
    std::vector<std::uint32_t> expect;
    for (std::uint32_t k : base) expect.push_back(perm[k]);
    std::sort(expect.begin(), expect.end());
    CHECK(moved == expect);
}

TEST_CASE("instance classifiers for the selection pipelines") {
    std::vector<Example> store = {ex("00", false), ex("01", false), ex("11", true)};
    Hypothesis nn = knn_train(store, 1);
    CHECK(nn.predict(BitVec::parse("11")) == true);
    CHECK(nn.predict(BitVec::parse("00")) == false);

    std::vector<Example> cen = {ex("00", false), ex("11", true)};
    Hypothesis centroid = centroid_train(cen);
    CHECK(centroid.predict(BitVec::parse("11")) == true);
}
