#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdl/dtree.hpp"
#include "mdl/rng.hpp"
#include "mdl/synth.hpp"

#include <set>

using namespace mdl;

namespace {

Example ex(std::string_view bits, bool y) { return {BitVec::parse(bits), y}; }

BitVec nth_input(std::uint32_t n, std::uint32_t value) {
    BitVec x(n);
    for (std::uint32_t k = 0; k < n; ++k) x.set(k, (value >> k) & 1);
    return x;
}

} // namespace

TEST_CASE("largest consistent conjunction keeps exactly the agreeing coordinates") {
    std::vector<BitVec> footnote = {BitVec::parse("001"), BitVec::parse("011")};
    Conjunction c = largest_consistent_conjunction(footnote);
    CHECK(c == Conjunction::of({{0, false}, {2, true}})); // x[1]=0 and x[3]=1

    std::vector<BitVec> single = {BitVec::parse("0110")};
    Conjunction all = largest_consistent_conjunction(single);
    CHECK(all.literals().size() == 4);
    CHECK(all.satisfied_by(BitVec::parse("0110")));

    std::vector<BitVec> covering = {BitVec::parse("00"), BitVec::parse("11"),
                                    BitVec::parse("01"), BitVec::parse("10")};
    Conjunction empty = largest_consistent_conjunction(covering);
    CHECK(empty.empty());
    CHECK(empty.satisfied_by(BitVec::parse("10")));

    CHECK_THROWS_AS(largest_consistent_conjunction(std::span<const BitVec>{}), invalid_input);
}

TEST_CASE("the union learner follows the positive datasets") {
    MultiDomainSample all_negative;
    all_negative.dimension = 3;
    all_negative.datasets = {Dataset{{ex("001", false), ex("010", false)}},
                             Dataset{{ex("111", false), ex("000", false)}}};
    Hypothesis h0 = learn_dt_multidataset(all_negative);
    CHECK(h0.members().empty());
    CHECK(h0.predict(BitVec::parse("101")) == false);

    MultiDomainSample footnote;
    footnote.dimension = 3;
    footnote.datasets = {Dataset{{ex("001", true), ex("011", true)}},
                         Dataset{{ex("100", false), ex("110", false)}}};
    Hypothesis h = learn_dt_multidataset(footnote);
    REQUIRE(h.members().size() == 1);
    CHECK(h.members()[0] == Conjunction::of({{0, false}, {2, true}}));

    MultiDomainSample mixed;
    mixed.dimension = 2;
    mixed.datasets = {Dataset{{ex("01", true), ex("10", false)}}};
    CHECK_THROWS_AS(learn_dt_multidataset(mixed), assumption_violation);
}

TEST_CASE("duplicate leaf conjunctions are stored once") {
    MultiDomainSample sample;
    sample.dimension = 3;
    sample.datasets = {Dataset{{ex("001", true), ex("011", true)}},
                       Dataset{{ex("011", true), ex("001", true)}}};
    Hypothesis h = learn_dt_multidataset(sample);
    CHECK(h.members().size() == 1);
}

TEST_CASE("the expected-error bound is plain arithmetic") {
    CHECK(dt_error_bound(8, 20, 160, 400) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(dt_error_bound(1, 1, 1, 2) == 2.0);
    CHECK(dt_error_bound(8, 20, 400, 400) == doctest::Approx(0.12).epsilon(1e-12));
    CHECK_THROWS_AS(dt_error_bound(0, 1, 1, 1), invalid_input);
}

TEST_CASE("no false positives on generated tree data") {
    std::uint64_t negative_evals = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto spec = synth::random_dtspec(derive_seed(500, seed), 16, 6, 1.0);
        auto train = synth::sample_training(spec, 60, 60);
        Hypothesis h = learn_dt_multidataset(train.sample);
        auto test = synth::sample_test(spec, 4000);
        for (const Example& e : test.examples) {
            if (e.y) continue;
            ++negative_evals;
            REQUIRE(h.predict(e.x) == false);
        }
    }
    CHECK(negative_evals > 5000);
}

TEST_CASE("learned conjunctions contain their leaf's literals") {
    auto spec = synth::random_dtspec(808, 14, 5, 1.0);
    const auto& dt = std::get<synth::DtSpec>(spec.dist);
    auto train = synth::sample_training(spec, 30, 40);
    for (std::size_t i = 0; i < train.sample.datasets.size(); ++i) {
        const auto& leaf = dt.tree.leaves()[train.domains[i]];
        if (!leaf.label) continue;
        std::vector<BitVec> positives;
        for (const Example& e : train.sample.datasets[i].examples) positives.push_back(e.x);
        Conjunction learned = largest_consistent_conjunction(positives);
        for (const Literal& lit : leaf.path.literals()) {
            bool found = false;
            for (const Literal& got : learned.literals())
                if (got == lit) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("adding a positive dataset only grows the positive region") {
    SplitMix64 rng(606);
    const std::uint32_t n = 8;
    for (int round = 0; round < 5; ++round) {
        MultiDomainSample sample;
        sample.dimension = n;
        for (int i = 0; i < 4; ++i) {
            Dataset ds;
            bool label = rng.bernoulli(0.5);
            BitVec base(n);
            for (std::uint32_t k = 0; k < n; ++k) base.set(k, rng.bernoulli(0.5));
            for (int j = 0; j < 6; ++j) {
                BitVec x = base;
                for (std::uint32_t k = 0; k < n; ++k)
                    if (rng.bernoulli(0.3)) x.set(k, rng.bernoulli(0.5));
                ds.examples.push_back({x, label});
            }
            sample.datasets.push_back(std::move(ds));
        }
        Hypothesis before = learn_dt_multidataset(sample);

        Dataset extra;
        for (int j = 0; j < 6; ++j) {
            BitVec x(n);
            for (std::uint32_t k = 0; k < n; ++k) x.set(k, rng.bernoulli(0.5));
            extra.examples.push_back({x, true});
        }
        MultiDomainSample grown = sample;
        grown.datasets.push_back(extra);
        // pad the original datasets so sizes stay uniform
        for (auto& ds : grown.datasets)
            while (ds.size() < grown.datasets.back().size())
                ds.examples.push_back(ds.examples.front());
        Hypothesis after = learn_dt_multidataset(grown);

        for (std::uint32_t value = 0; value < (1u << n); ++value) {
            BitVec x = nth_input(n, value);
            if (before.predict(x)) REQUIRE(after.predict(x));
        }
    }
}

TEST_CASE("union hypotheses round-trip through the signed-literal text") {
    SplitMix64 rng(909);
    for (int round = 0; round < 50; ++round) {
        std::vector<Conjunction> members;
        int count = 1 + static_cast<int>(rng.next_below(4));
        for (int i = 0; i < count; ++i) {
            std::vector<Literal> lits;
            for (std::uint32_t k = 0; k < 6; ++k)
                if (rng.bernoulli(0.4)) lits.push_back({k, rng.bernoulli(0.5)});
            members.push_back(Conjunction::of(std::move(lits)));
        }
        Hypothesis h = Hypothesis::union_of(members);
        Hypothesis back = parse_union(write_union(h));
        REQUIRE(back.members() == h.members());
    }

    // the empty conjunction and comments have dedicated text forms
    Hypothesis top = Hypothesis::union_of({Conjunction::always()});
    CHECK(parse_union(write_union(top)).members() == top.members());
    Hypothesis parsed = parse_union("# comment\n-1 +3\n\ntrue\n");
    REQUIRE(parsed.members().size() == 2);
    CHECK(parsed.members()[0] == Conjunction::of({{0, false}, {2, true}}));
    CHECK(parsed.members()[1].empty());
    CHECK_THROWS_AS(parse_union("+0\n"), invalid_input);
    CHECK_THROWS_AS(parse_union("x1\n"), invalid_input);
}
