#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdl/evaluate.hpp"
#include "mdl/featsel.hpp"
#include "mdl/synth.hpp"

#include <cmath>
#include <set>

using namespace mdl;
using namespace mdl::synth;

namespace {

GeneratorSpec mdm_spec(std::uint64_t seed, std::uint32_t n, Conjunction target,
                       std::vector<double> noise, double eta_bound) {
    MdmSpec mdm;
    mdm.n = n;
    mdm.target = std::move(target);
    mdm.eta_bound = eta_bound;
    mdm.noise = std::move(noise);
    mdm.weights.assign(mdm.noise.size(), 1.0 / mdm.noise.size());
    mdm.marginal.assign(n, 0.5);
    GeneratorSpec spec;
    spec.dist = std::move(mdm);
    spec.seed = seed;
    return spec;
}

bool same_sample(const MultiDomainSample& a, const MultiDomainSample& b) {
    if (a.dimension != b.dimension || a.datasets.size() != b.datasets.size()) return false;
    for (std::size_t i = 0; i < a.datasets.size(); ++i) {
        const auto& da = a.datasets[i].examples;
        const auto& db = b.datasets[i].examples;
        if (da.size() != db.size()) return false;
        for (std::size_t j = 0; j < da.size(); ++j)
            if (!(da[j].x == db[j].x) || da[j].y != db[j].y) return false;
    }
    return true;
}

} // namespace

TEST_CASE("identical (spec, seed, d, m) draws are bit-identical") {
    auto spec = random_dtspec(99, 12, 5, 1.0);
    auto a = sample_training(spec, 7, 13, 3);
    auto b = sample_training(spec, 7, 13, 3);
    CHECK(same_sample(a.sample, b.sample));
    CHECK(a.domains == b.domains);
    auto c = sample_training(spec, 7, 13, 4);
    CHECK(!same_sample(a.sample, c.sample));
}

TEST_CASE("tree draws stay inside their leaf and match the tree label") {
    auto spec = random_dtspec(123, 16, 6, 0.7);
    const auto& dt = std::get<DtSpec>(spec.dist);
    auto draw = sample_training(spec, 40, 25);
    for (std::size_t i = 0; i < draw.sample.datasets.size(); ++i) {
        const auto& leaf = dt.tree.leaves()[draw.domains[i]];
        for (const Example& ex : draw.sample.datasets[i].examples) {
            CHECK(leaf.path.satisfied_by(ex.x));
            CHECK(ex.y == dt.tree.evaluate(ex.x));
            CHECK(ex.y == leaf.label);
        }
    }
}

TEST_CASE("single positive leaf labels everything 1") {
    DtSpec dt;
    dt.n = 6;
    dt.tree = DecisionTree::single_leaf(true);
    dt.leaf_probs = {1.0};
    GeneratorSpec spec;
    spec.dist = dt;
    spec.seed = 5;
    auto draw = sample_training(spec, 4, 50);
    for (const auto& ds : draw.sample.datasets)
        for (const Example& ex : ds.examples) CHECK(ex.y);
    auto test = sample_test(spec, 200);
    for (const Example& ex : test.examples) CHECK(ex.y);
}

TEST_CASE("zero label noise reproduces the target everywhere") {
    auto target = Conjunction::of({{1, true}, {4, false}});
    auto spec = mdm_spec(17, 8, target, {0.0, 0.0, 0.0}, 0.3);
    auto draw = sample_training(spec, 20, 50);
    for (const auto& ds : draw.sample.datasets)
        for (const Example& ex : ds.examples) CHECK(ex.y == target.satisfied_by(ex.x));
}

TEST_CASE("label flips concentrate at the configured rate") {
    auto target = Conjunction::of({{0, true}, {3, true}});
    auto spec = mdm_spec(29, 10, target, {0.3}, 0.3);
    auto draw = sample_training(spec, 1, 100000);
    std::uint64_t flips = 0;
    for (const Example& ex : draw.sample.datasets[0].examples)
        flips += ex.y != target.satisfied_by(ex.x);
    double rate = static_cast<double>(flips) / 100000.0;
    CHECK(rate == doctest::Approx(0.3).epsilon(0.04)); // 0.3 +- ~0.01 absolute
    CHECK(std::abs(rate - 0.3) <= 0.01);
}

TEST_CASE("noisy test streams measure the observed-label error of the target") {
    auto target = Conjunction::of({{2, false}});
    auto spec = mdm_spec(31, 6, target, {0.2, 0.2}, 0.25);
    auto noisy = sample_test(spec, 100000, 0, true);
    Hypothesis truth = Hypothesis::conj(target);
    double err = error_rate(truth, noisy.examples);
    CHECK(std::abs(err - 0.2) <= 0.01);

    auto clean = sample_test(spec, 5000, 0, false);
    CHECK(error_rate(truth, clean.examples) == 0.0);
}

TEST_CASE("massart marginal keeps flips below the bound") {
    auto target = Conjunction::of({{0, true}});
    auto spec = mdm_spec(37, 5, target, {0.05, 0.18, 0.3}, 0.3);
    auto test = sample_test(spec, 60000, 1, true);
    std::uint64_t flips = 0;
    for (const Example& ex : test.examples) flips += ex.y != target.satisfied_by(ex.x);
    CHECK(static_cast<double>(flips) / 60000.0 <= 0.3 + 0.01);
}

TEST_CASE("feature-selection draws hit their analytic correlations") {
    FsSpec::Params params;
    params.n = 12;
    params.robust = {1, 4, 7};
    params.beta = 0.2;
    params.domain_count = 4;
    params.profile_seed = 77;
    FsSpec fs = FsSpec::build(params);
    GeneratorSpec spec;
    spec.dist = fs;
    spec.seed = 1234;

    // robust coordinates: empirical correlation within 0.02 of analytic
    auto test = sample_test(spec, 100000);
    for (std::size_t r = 0; r < fs.robust.size(); ++r) {
        featsel::PairCounts counts;
        for (const Example& ex : test.examples) {
            bool bit = ex.x.get(fs.robust[r]);
            if (bit) (ex.y ? counts.n11 : counts.n10)++;
            else (ex.y ? counts.n01 : counts.n00)++;
        }
        auto rho = featsel::binary_correlation(counts);
        REQUIRE(rho.has_value());
        CHECK(std::abs(*rho - fs.robust_rho[r]) <= 0.02);
    }

    // labels are noiseless values of the target on the robust coordinates
    for (const Example& ex : test.examples) {
        BitVec projected(fs.robust.size());
        for (std::size_t i = 0; i < fs.robust.size(); ++i)
            projected.set(i, ex.x.get(fs.robust[i]));
        bool truth = true;
        for (std::size_t i = 0; i < fs.target.literals().size(); ++i)
            truth = truth && ex.x.get(fs.target.literals()[i].feature) ==
                                 fs.target.literals()[i].value;
        CHECK(ex.y == truth);
    }

    // idiosyncratic coordinates: per-domain correlation matches the profile
    auto per_domain = sample_test(spec, 200000, 9);
    for (std::size_t j = 0; j < fs.idio_coords.size(); j += 5) {
        for (std::uint32_t z = 0; z < fs.domain_count; ++z) {
            featsel::PairCounts counts;
            for (std::size_t i = 0; i < per_domain.examples.size(); ++i) {
                if (per_domain.domains[i] != z) continue;
                bool bit = per_domain.examples[i].x.get(fs.idio_coords[j]);
                if (bit) (per_domain.examples[i].y ? counts.n11 : counts.n10)++;
                else (per_domain.examples[i].y ? counts.n01 : counts.n00)++;
            }
            auto rho = featsel::binary_correlation(counts);
            REQUIRE(rho.has_value());
            CHECK(std::abs(*rho - fs.idio_rho[j][z]) <= 0.025);
        }
    }
}

TEST_CASE("robust coordinates are independent of the domain") {
    FsSpec::Params params;
    params.n = 8;
    params.robust = {0, 3};
    params.beta = 0.2;
    params.domain_count = 2;
    params.weights = {0.5, 0.5};
    params.profile_seed = 3;
    FsSpec fs = FsSpec::build(params);
    GeneratorSpec spec;
    spec.dist = fs;
    spec.seed = 55;

    auto draw = sample_training(spec, 4, 50000);
    for (std::uint32_t k : fs.robust) {
        double global = 0.0;
        std::vector<double> per_dataset(draw.sample.datasets.size());
        for (std::size_t i = 0; i < draw.sample.datasets.size(); ++i) {
            double mean = 0.0;
            for (const Example& ex : draw.sample.datasets[i].examples)
                mean += ex.x.get(k);
            per_dataset[i] = mean / 50000.0;
            global += per_dataset[i];
        }
        global /= static_cast<double>(per_dataset.size());
        for (double mean : per_dataset) CHECK(std::abs(mean - global) <= 0.02);
    }
}

TEST_CASE("fs build rejects infeasible clause parameters") {
    FsSpec::Params params;
    params.n = 6;
    params.robust = {0, 1};
    params.beta = 0.9; // robust correlation cannot clear 1.1 * 0.9
    params.profile_seed = 1;
    CHECK_THROWS_AS(FsSpec::build(params), invalid_input);

    FsSpec::Params weak;
    weak.n = 6;
    weak.robust = {0, 1};
    weak.beta = 0.2;
    weak.idio_rho_lo = 0.1; // strong magnitude below 1.1 * beta
    weak.idio_rho_hi = 0.15;
    weak.profile_seed = 1;
    CHECK_THROWS_AS(FsSpec::build(weak), invalid_input);
}

TEST_CASE("random tree specs cover the degenerate shapes") {
    auto s1 = random_dtspec(5, 4, 1, 1.0);
    const auto& dt1 = std::get<DtSpec>(s1.dist);
    CHECK(dt1.tree.leaf_count() == 1);
    CHECK(dt1.leaf_probs == std::vector<double>{1.0});

    auto s2 = random_dtspec(6, 4, 2, 1.0);
    const auto& dt2 = std::get<DtSpec>(s2.dist);
    CHECK(dt2.tree.leaf_count() == 2);
    CHECK(dt2.tree.nodes().size() == 3); // one split, two leaves
    // both labels present
    CHECK(dt2.tree.leaves()[0].label != dt2.tree.leaves()[1].label);

    CHECK_THROWS_AS(random_dtspec(7, 2, 5, 1.0), invalid_input); // 5 leaves need 3 features
}

TEST_CASE("random tree specs satisfy the structural invariants across seeds") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto spec = random_dtspec(seed, 20, 8, 1.0);
        const auto& dt = std::get<DtSpec>(spec.dist);
        dt.validate(); // path-distinctness and leaf conjunction checks
        CHECK(dt.tree.leaf_count() == 8);
        bool saw_pos = false, saw_neg = false;
        for (const auto& leaf : dt.tree.leaves()) (leaf.label ? saw_pos : saw_neg) = true;
        CHECK(saw_pos);
        CHECK(saw_neg);
        double sum = 0.0;
        for (double p : dt.leaf_probs) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("generator specs round-trip through the config format") {
    auto dt_spec = random_dtspec(42, 10, 6, 2.0);
    Config dt_cfg = write_spec(dt_spec);
    GeneratorSpec dt_back = parse_spec(dt_cfg);
    CHECK(write_spec(dt_back).write() == dt_cfg.write());
    CHECK(same_sample(sample_training(dt_spec, 5, 9).sample,
                      sample_training(dt_back, 5, 9).sample));

    auto target = Conjunction::of({{1, true}, {4, false}});
    auto mdm = mdm_spec(7, 8, target, {0.1, 0.25}, 0.3);
    Config mdm_cfg = write_spec(mdm);
    GeneratorSpec mdm_back = parse_spec(mdm_cfg);
    CHECK(write_spec(mdm_back).write() == mdm_cfg.write());
    CHECK(same_sample(sample_training(mdm, 3, 20).sample,
                      sample_training(mdm_back, 3, 20).sample));

    FsSpec::Params params;
    params.n = 9;
    params.robust = {2, 5};
    params.beta = 0.2;
    params.domain_count = 3;
    params.profile_seed = 11;
    GeneratorSpec fs;
    fs.dist = FsSpec::build(params);
    fs.seed = 88;
    Config fs_cfg = write_spec(fs);
    GeneratorSpec fs_back = parse_spec(fs_cfg);
    CHECK(write_spec(fs_back).write() == fs_cfg.write());
    CHECK(same_sample(sample_training(fs, 4, 30).sample,
                      sample_training(fs_back, 4, 30).sample));
    // the derived profile itself is reproduced
    const auto& a = std::get<FsSpec>(fs.dist);
    const auto& b = std::get<FsSpec>(fs_back.dist);
    CHECK(a.idio_rho == b.idio_rho);
    CHECK(a.robust_rho == b.robust_rho);
    CHECK(a.target == b.target);
}

TEST_CASE("tree text grammar round-trips") {
    auto spec = random_dtspec(404, 12, 7, 1.0);
    const auto& dt = std::get<DtSpec>(spec.dist);
    std::string text = write_tree(dt.tree);
    DecisionTree back = parse_tree(text);
    CHECK(write_tree(back) == text);
    CHECK_THROWS_AS(parse_tree("(1 0"), invalid_input);
    CHECK_THROWS_AS(parse_tree("(0 0 1)"), invalid_input); // features are 1-based
}
