#include "mdl/bench.hpp"

#include "mdl/dtree.hpp"
#include "mdl/massart.hpp"
#include "mdl/parallel.hpp"
#include "mdl/rng.hpp"
#include "mdl/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>
#include <sstream>

namespace mdl::bench {

bool operator==(const TrialRecord& a, const TrialRecord& b) {
    auto same = [](double x, double y) {
        return (std::isnan(x) && std::isnan(y)) || x == y;
    };
    return a.index == b.index && a.seed == b.seed && a.hypothesis == b.hypothesis &&
           same(a.error, b.error) && same(a.balanced_error, b.balanced_error) &&
           a.false_positives == b.false_positives && a.negative_evals == b.negative_evals &&
           a.recovered == b.recovered && a.violation == b.violation && a.passed == b.passed &&
           a.note == b.note;
}

namespace {

double quantile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
    return sorted[idx];
}

std::string now_iso8601() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

nlohmann::json num_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

double num_from(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::numeric_limits<double>::quiet_NaN();
    return j.at(key).get<double>();
}

/// Correlation of a binary pair from exact cell probabilities.
double corr_from_probs(double a, double b, double c, double d) {
    double den = (a + b) * (c + d) * (a + c) * (b + d);
    if (den <= 0.0) return 0.0;
    return (a * d - b * c) / std::sqrt(den);
}

} // namespace

Aggregates compute_aggregates(std::span<const TrialRecord> trials) {
    Aggregates agg;
    std::vector<double> errors;
    double sum = 0.0;
    for (const TrialRecord& rec : trials) {
        double e = std::isnan(rec.error) ? rec.balanced_error : rec.error;
        if (!std::isnan(e)) {
            errors.push_back(e);
            sum += e;
        }
        agg.false_positives += rec.false_positives;
        agg.negative_evals += rec.negative_evals;
        if (rec.recovered == 1) ++agg.recovered_count;
        if (rec.passed) ++agg.pass_count;
        if (rec.violation) ++agg.violation_count;
    }
    if (!errors.empty()) {
        const double mean = sum / static_cast<double>(errors.size());
        agg.mean_error = mean;
        double sq = 0.0;
        for (double e : errors) sq += (e - mean) * (e - mean);
        agg.std_error = std::sqrt(sq / static_cast<double>(errors.size()));
        std::sort(errors.begin(), errors.end());
        agg.q10 = quantile(errors, 0.10);
        agg.q50 = quantile(errors, 0.50);
        agg.q90 = quantile(errors, 0.90);
    }
    return agg;
}

nlohmann::json TrialReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["fingerprint"] = fingerprint;
    j["config"] = config.entries();
    j["bound"] = num_or_null(bound);
    j["passed"] = passed;
    j["detail"] = detail;
    j["timestamp"] = timestamp;
    j["runtime_seconds"] = runtime_seconds;
    nlohmann::json records = nlohmann::json::array();
    for (const TrialRecord& rec : trials) {
        nlohmann::json r;
        r["index"] = rec.index;
        r["seed"] = rec.seed;
        r["hypothesis"] = rec.hypothesis;
        r["error"] = num_or_null(rec.error);
        r["balanced_error"] = num_or_null(rec.balanced_error);
        r["false_positives"] = rec.false_positives;
        r["negative_evals"] = rec.negative_evals;
        r["recovered"] = rec.recovered;
        r["violation"] = rec.violation;
        r["passed"] = rec.passed;
        r["note"] = rec.note;
        records.push_back(std::move(r));
    }
    j["trials"] = std::move(records);
    nlohmann::json agg;
    agg["mean_error"] = num_or_null(aggregates.mean_error);
    agg["std_error"] = num_or_null(aggregates.std_error);
    agg["q10"] = num_or_null(aggregates.q10);
    agg["q50"] = num_or_null(aggregates.q50);
    agg["q90"] = num_or_null(aggregates.q90);
    agg["false_positives"] = aggregates.false_positives;
    agg["negative_evals"] = aggregates.negative_evals;
    agg["recovered_count"] = aggregates.recovered_count;
    agg["pass_count"] = aggregates.pass_count;
    agg["violation_count"] = aggregates.violation_count;
    j["aggregates"] = std::move(agg);
    return j;
}

TrialReport TrialReport::from_json(const nlohmann::json& j) {
    TrialReport report;
    report.experiment = j.at("experiment").get<std::string>();
    report.fingerprint = j.at("fingerprint").get<std::string>();
    Config cfg;
    for (const auto& [key, value] : j.at("config").items())
        cfg.set(key, value.get<std::string>());
    report.config = cfg;
    report.bound = num_from(j, "bound");
    report.passed = j.at("passed").get<bool>();
    report.detail = j.at("detail").get<std::string>();
    report.timestamp = j.value("timestamp", "");
    report.runtime_seconds = j.value("runtime_seconds", 0.0);
    for (const auto& r : j.at("trials")) {
        TrialRecord rec;
        rec.index = r.at("index").get<std::uint64_t>();
        rec.seed = r.at("seed").get<std::uint64_t>();
        rec.hypothesis = r.at("hypothesis").get<std::string>();
        rec.error = num_from(r, "error");
        rec.balanced_error = num_from(r, "balanced_error");
        rec.false_positives = r.at("false_positives").get<std::uint64_t>();
        rec.negative_evals = r.at("negative_evals").get<std::uint64_t>();
        rec.recovered = r.at("recovered").get<int>();
        rec.violation = r.at("violation").get<bool>();
        rec.passed = r.at("passed").get<bool>();
        rec.note = r.at("note").get<std::string>();
        report.trials.push_back(std::move(rec));
    }

    report.aggregates = compute_aggregates(report.trials);
    const auto& agg = j.at("aggregates");
    auto close = [](double a, double b) {
        if (std::isnan(a) && std::isnan(b)) return true;
        return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    bool ok = close(report.aggregates.mean_error, num_from(agg, "mean_error")) &&
              close(report.aggregates.std_error, num_from(agg, "std_error")) &&
              close(report.aggregates.q10, num_from(agg, "q10")) &&
              close(report.aggregates.q50, num_from(agg, "q50")) &&
              close(report.aggregates.q90, num_from(agg, "q90")) &&
              report.aggregates.false_positives == agg.at("false_positives") &&
              report.aggregates.negative_evals == agg.at("negative_evals") &&
              report.aggregates.recovered_count == agg.at("recovered_count") &&
              report.aggregates.pass_count == agg.at("pass_count") &&
              report.aggregates.violation_count == agg.at("violation_count");
    if (!ok)
        throw invalid_input("TrialReport: stored aggregates do not match the per-trial records");
    return report;
}

std::string TrialReport::trials_csv() const {
    std::ostringstream out;
    out << "trial,seed,error,balanced_error,false_positives,negative_evals,recovered,"
           "violation,passed,hypothesis,note\n";
    for (const TrialRecord& rec : trials) {
        out << rec.index << ',' << rec.seed << ',';
        if (!std::isnan(rec.error)) out << format_double(rec.error);
        out << ',';
        if (!std::isnan(rec.balanced_error)) out << format_double(rec.balanced_error);
        out << ',' << rec.false_positives << ',' << rec.negative_evals << ','
            << rec.recovered << ',' << (rec.violation ? 1 : 0) << ',' << (rec.passed ? 1 : 0)
            << ',' << rec.hypothesis << ',' << rec.note << '\n';
    }
    return out.str();
}

std::vector<std::string> suite_names() {
    return {"dtree", "massart", "fud", "lemma1", "fsus"};
}

namespace {

TrialReport begin_report(std::string name, const Config& cfg) {
    TrialReport report;
    report.experiment = std::move(name);
    report.config = cfg;
    report.fingerprint = cfg.fingerprint();
    report.timestamp = now_iso8601();
    return report;
}

TrialReport run_dtree_suite(const Config& cfg) {
    TrialReport report = begin_report("dtree", cfg);
    const auto s = static_cast<std::uint32_t>(cfg.get_uint("s", 8));
    const auto n = static_cast<std::uint32_t>(cfg.get_uint("n", 20));
    const auto d = static_cast<std::uint32_t>(cfg.get_uint("d", 400));
    const auto m = static_cast<std::uint32_t>(cfg.get_uint("m", 400));
    const auto trials = static_cast<std::uint32_t>(cfg.get_uint("trials", 100));
    const auto eval_n = static_cast<std::uint32_t>(cfg.get_uint("eval_n", 50000));
    const double skew = cfg.get_double("skew", 1.0);
    const std::uint64_t seed = cfg.get_uint("seed", 1);

    report.bound = dt_error_bound(s, n, d, m);
    report.trials.resize(trials);
    parallel_for(trials, [&](std::size_t t) {
        TrialRecord rec;
        rec.index = t;
        rec.seed = derive_seed(seed, t);
        try {
            auto spec = synth::random_dtspec(derive_seed(rec.seed, "spec"), n, s, skew);
            auto train = synth::sample_training(spec, d, m);
            Hypothesis h = learn_dt_multidataset(train.sample);
            auto test = synth::sample_test(spec, eval_n);
            std::uint64_t wrong = 0;
            for (const Example& ex : test.examples) {
                bool pred = h.predict(ex.x);
                wrong += pred != ex.y;
                if (!ex.y) {
                    ++rec.negative_evals;
                    rec.false_positives += pred;
                }
            }
            rec.error = static_cast<double>(wrong) / static_cast<double>(eval_n);
            rec.hypothesis = h.summary();
            rec.passed = rec.false_positives == 0;
        } catch (const assumption_violation& e) {
            rec.violation = true;
            rec.passed = false;
            rec.note = e.what();
        }
        report.trials[t] = std::move(rec);
    });

    report.aggregates = compute_aggregates(report.trials);
    const bool bound_ok = !cfg.get_bool("require_mean_error_le_bound", true) ||
                          report.aggregates.mean_error <= report.bound;
    const bool fp_ok = !cfg.get_bool("require_zero_false_positives", true) ||
                       report.aggregates.false_positives == 0;
    report.passed = bound_ok && fp_ok && report.aggregates.violation_count == 0;
    std::ostringstream detail;
    detail << "mean_error=" << report.aggregates.mean_error << " bound=" << report.bound
           << " false_positives=" << report.aggregates.false_positives
           << " negative_evals=" << report.aggregates.negative_evals;
    report.detail = detail.str();
    return report;
}

TrialReport run_massart_suite(const Config& cfg) {
    TrialReport report = begin_report("massart", cfg);
    const auto n = static_cast<std::uint32_t>(cfg.get_uint("n", 10));
    const auto d = static_cast<std::uint32_t>(cfg.get_uint("d", 200));
    const auto m = static_cast<std::uint32_t>(cfg.get_uint("m", 500));
    const auto trials = static_cast<std::uint32_t>(cfg.get_uint("trials", 100));
    const auto domains = static_cast<std::uint32_t>(cfg.get_uint("domains", d));
    const auto eval_n = static_cast<std::uint32_t>(cfg.get_uint("eval_n", 20000));
    const auto target_literals =
        static_cast<std::uint32_t>(cfg.get_uint("target_literals", 2));
    const double marginal_p = cfg.get_double("marginal_p", 0.5);
    const double eta_bound = cfg.get_double("eta_bound", 0.3);
    const double eps = cfg.get_double("eps", 0.05);
    const double delta = cfg.get_double("delta", 0.1);
    const double err_threshold = cfg.get_double("err_threshold", 0.05);
    const double pass_min_fraction = cfg.get_double("pass_min_fraction", 0.9);
    const std::uint64_t seed = cfg.get_uint("seed", 1);

    massart::DenoiseOptions options;
    options.final_noise_bound = cfg.get_double("final_noise_bound", 0.0);
    const massart::CnLearnerHandle learner = massart::conjunction_cn_learner();

    report.trials.resize(trials);
    parallel_for(trials, [&](std::size_t t) {
        TrialRecord rec;
        rec.index = t;
        rec.seed = derive_seed(seed, t);

        SplitMix64 make(derive_seed(rec.seed, "instance"));
        synth::MdmSpec mdm;
        mdm.n = n;
        mdm.eta_bound = eta_bound;
        std::vector<Literal> lits;
        std::vector<std::uint32_t> coords(n);
        std::iota(coords.begin(), coords.end(), 0);
        for (std::uint32_t i = 0; i < target_literals; ++i) {
            std::size_t pick = make.next_below(coords.size());
            lits.push_back({coords[pick], make.bernoulli(0.5)});
            coords.erase(coords.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        mdm.target = Conjunction::of(std::move(lits));
        mdm.noise.resize(domains);
        for (double& e : mdm.noise) e = make.uniform(0.0, eta_bound);
        mdm.weights.assign(domains, 1.0 / domains);
        mdm.marginal.assign(n, marginal_p);

        synth::GeneratorSpec gspec;
        gspec.dist = mdm;
        gspec.seed = derive_seed(rec.seed, "gen");

        try {
            auto train = synth::sample_training(gspec, d, m);
            Hypothesis h = massart::denoise_reduce(train.sample, learner, eta_bound, eps,
                                                   delta, derive_seed(rec.seed, "reduce"),
                                                   options);
            auto test = synth::sample_test(gspec, eval_n); // true-concept labels
            rec.error = error_rate(h, test.examples);
            rec.hypothesis = h.summary();
            rec.passed = rec.error <= err_threshold;
        } catch (const assumption_violation& e) {
            rec.violation = true;
            rec.passed = false;
            rec.note = e.what();
        }
        report.trials[t] = std::move(rec);
    });

    report.aggregates = compute_aggregates(report.trials);
    const auto need = static_cast<std::uint32_t>(
        std::ceil(pass_min_fraction * static_cast<double>(trials)));
    report.passed = report.aggregates.pass_count >= need;
    std::ostringstream detail;
    detail << "err<=" << err_threshold << " in " << report.aggregates.pass_count << "/"
           << trials << " trials (need " << need << "), mean_error="
           << report.aggregates.mean_error;
    report.detail = detail.str();
    return report;
}

TrialReport run_fud_suite(const Config& cfg) {
    TrialReport report = begin_report("fud", cfg);
    const auto n = static_cast<std::uint32_t>(cfg.get_uint("n", 50));
    const auto rstar = static_cast<std::uint32_t>(cfg.get_uint("rstar", 5));
    const auto d = static_cast<std::uint32_t>(cfg.get_uint("d", 30));
    const auto m = static_cast<std::uint32_t>(cfg.get_uint("m", 2000));
    const auto trials = static_cast<std::uint32_t>(cfg.get_uint("trials", 100));
    const auto domains = static_cast<std::uint32_t>(cfg.get_uint("domains", 10));
    const auto eval_n = static_cast<std::uint32_t>(cfg.get_uint("eval_n", 10000));
    const double beta = cfg.get_double("beta", 0.2);
    const double eps = cfg.get_double("eps", 0.1);
    const double err_threshold = cfg.get_double("err_threshold", 0.05);
    const double recovery_min_fraction = cfg.get_double("recovery_min_fraction", 0.95);
    const std::uint64_t seed = cfg.get_uint("seed", 1);

    report.trials.resize(trials);
    parallel_for(trials, [&](std::size_t t) {
        TrialRecord rec;
        rec.index = t;
        rec.seed = derive_seed(seed, t);
        try {
            SplitMix64 make(derive_seed(rec.seed, "instance"));
            synth::FsSpec::Params params;
            params.n = n;
            std::vector<std::uint32_t> coords(n);
            std::iota(coords.begin(), coords.end(), 0);
            for (std::uint32_t i = 0; i < rstar; ++i) {
                std::size_t pick = make.next_below(coords.size());
                params.robust.push_back(coords[pick]);
                coords.erase(coords.begin() + static_cast<std::ptrdiff_t>(pick));
            }
            params.beta = beta;
            params.label_bias = cfg.get_double("label_bias", 0.5);
            params.neg_flip = cfg.get_double("neg_flip", 0.5);
            params.domain_count = domains;
            params.idio_rho_lo = cfg.get_double("idio_rho_lo", 0.5);
            params.idio_rho_hi = cfg.get_double("idio_rho_hi", 0.8);
            params.idio_zero_frac = cfg.get_double("idio_zero_frac", 0.3);
            params.profile_seed = derive_seed(rec.seed, "profile");
            synth::FsSpec fs = synth::FsSpec::build(params);
            std::vector<std::uint32_t> truth = fs.robust;

            synth::GeneratorSpec gspec;
            gspec.dist = std::move(fs);
            gspec.seed = derive_seed(rec.seed, "gen");

            auto train = synth::sample_training(gspec, d, m);
            Hypothesis h =
                fud(train.sample, featsel::ConceptClass::conjunctions(), beta, eps);
            rec.hypothesis = h.summary();
            rec.recovered = h.kind() == Hypothesis::Kind::masked && h.mask() == truth ? 1 : 0;
            auto test = synth::sample_test(gspec, eval_n);
            rec.error = error_rate(h, test.examples);
            rec.passed = rec.recovered == 1 && rec.error <= err_threshold;
        } catch (const assumption_violation& e) {
            rec.violation = true;
            rec.recovered = 0;
            rec.passed = false;
            rec.note = e.what();
        }
        report.trials[t] = std::move(rec);
    });

    report.aggregates = compute_aggregates(report.trials);
    const auto need = static_cast<std::uint32_t>(
        std::ceil(recovery_min_fraction * static_cast<double>(trials)));
    report.passed = report.aggregates.pass_count >= need;
    std::ostringstream detail;
    detail << "recovered=" << report.aggregates.recovered_count << "/" << trials
           << ", recovered-with-low-error=" << report.aggregates.pass_count << " (need "
           << need << "), mean_error=" << report.aggregates.mean_error;
    report.detail = detail.str();
    return report;
}

TrialReport run_lemma1_suite(const Config& cfg) {
    TrialReport report = begin_report("lemma1", cfg);
    const auto trials = static_cast<std::uint32_t>(cfg.get_uint("trials", 200));
    const double eps = cfg.get_double("eps", 0.5);
    const double v = cfg.get_double("v", 0.5);
    const double delta = cfg.get_double("delta", 0.1);
    const double max_fail = cfg.get_double("max_failure_fraction", delta);
    const std::uint64_t seed = cfg.get_uint("seed", 1);
    const std::uint64_t m = featsel::lemma1_sample_bound(eps, v, delta);

    // The proof's three regimes over the rare-row mass c+d, with E[S] = 1/2
    // (inside [v, 1-v] for every admissible v). tau is the proof's cell
    // accuracy eps^2 v / 64.
    const double tau = eps * eps * v / 64.0;
    if (tau >= 0.3)
        throw invalid_input("lemma1 suite: regimes assume tau < 0.3");
    struct Regime {
        const char* name;
        double a, b, c, d;
    };
    const Regime regimes[3] = {
        {"case1", 0.5 - tau / 3.0, 0.5 - tau / 6.0, tau / 3.0, tau / 6.0},
        {"case2", 0.4, 0.3, 0.1, 0.2},
        {"case3", 0.1, 0.2, 0.4, 0.3}, // polarity flip of case2: c+d >= 1/2
    };

    report.trials.resize(std::size_t(3) * trials);
    parallel_for(report.trials.size(), [&](std::size_t idx) {
        const std::size_t regime_idx = idx / trials;
        const Regime& regime = regimes[regime_idx];
        const double truth = corr_from_probs(regime.a, regime.b, regime.c, regime.d);

        TrialRecord rec;
        rec.index = idx;
        rec.seed = derive_seed(derive_seed(seed, regime.name), idx % trials);
        rec.note = regime.name;
        SplitMix64 rng(rec.seed);
        featsel::PairCounts counts;
        const double t1 = regime.a, t2 = regime.a + regime.b, t3 = t2 + regime.c;
        for (std::uint64_t i = 0; i < m; ++i) {
            double u = rng.next_double();
            if (u < t1) ++counts.n00;
            else if (u < t2) ++counts.n01;
            else if (u < t3) ++counts.n10;
            else ++counts.n11;
        }
        auto rho = featsel::binary_correlation(counts);
        rec.error = rho ? std::abs(*rho - truth) : 1.0; // undefined counts as failure
        rec.passed = rec.error <= eps;
        report.trials[idx] = std::move(rec);
    });

    report.aggregates = compute_aggregates(report.trials);
    std::ostringstream detail;
    detail << "m=" << m;
    report.passed = true;
    for (int r = 0; r < 3; ++r) {
        std::uint32_t failures = 0;
        for (std::uint32_t t = 0; t < trials; ++t)
            failures += report.trials[std::size_t(r) * trials + t].passed ? 0 : 1;
        const double frac = static_cast<double>(failures) / trials;
        report.passed = report.passed && frac <= max_fail;
        detail << ' ' << regimes[r].name << "_failures=" << failures << '/' << trials;
    }
    report.detail = detail.str();
    return report;
}

TrialReport run_fsus_suite(const Config& cfg) {
    TrialReport report = begin_report("fsus", cfg);
    const auto corpus_seeds = static_cast<std::uint32_t>(cfg.get_uint("trials", 20));
    const double alpha = cfg.get_double("alpha", 2.0);
    const auto knn_k = static_cast<std::uint32_t>(cfg.get_uint("knn_k", 5));
    const auto min_occ = static_cast<std::uint32_t>(cfg.get_uint("min_occurrences", 50));
    const std::uint64_t seed = cfg.get_uint("seed", 1);
    std::vector<std::uint32_t> counts = cfg.has("counts")
                                            ? cfg.get_uints("counts")
                                            : std::vector<std::uint32_t>{10, 20, 50};

    MimicParams mimic;
    mimic.robust_features = static_cast<std::uint32_t>(cfg.get_uint("robust_features", 30));
    mimic.idio_features = static_cast<std::uint32_t>(cfg.get_uint("idio_features", 45));
    mimic.noise_features = static_cast<std::uint32_t>(cfg.get_uint("noise_features", 45));
    if (cfg.has("domain_sizes")) mimic.domain_sizes = cfg.get_uints("domain_sizes");
    if (cfg.has("domain_bias")) mimic.domain_bias = cfg.get_doubles("domain_bias");
    mimic.robust_rho_lo = cfg.get_double("robust_rho_lo", mimic.robust_rho_lo);
    mimic.robust_rho_hi = cfg.get_double("robust_rho_hi", mimic.robust_rho_hi);
    mimic.idio_rho_lo = cfg.get_double("idio_rho_lo", mimic.idio_rho_lo);
    mimic.idio_rho_hi = cfg.get_double("idio_rho_hi", mimic.idio_rho_hi);
    mimic.idio_strong_prob = cfg.get_double("idio_strong_prob", mimic.idio_strong_prob);

    struct Key {
        Selector selector;
        Classifier classifier;
        std::uint32_t count;
        bool operator<(const Key& o) const {
            return std::tie(selector, classifier, count) <
                   std::tie(o.selector, o.classifier, o.count);
        }
    };
    std::map<Key, double> sums;
    std::vector<std::vector<TrialRecord>> per_seed(corpus_seeds);

    parallel_for(corpus_seeds, [&](std::size_t cs) {
        // exercise the file format on the way in
        BagOfWordsCorpus raw = universities_mimic(derive_seed(seed, cs), mimic);
        std::istringstream round_trip(write_corpus(raw));
        BagOfWordsCorpus corpus = ingest_bow(round_trip, min_occ);
        const auto D = static_cast<std::uint32_t>(corpus.domain_ids().size());

        for (Selector sel : {Selector::baseline, Selector::fsus}) {
            for (Classifier clf : {Classifier::knn, Classifier::centroid}) {
                XvalOptions options;
                options.train_domains = D - 1; // leave-one-domain-out
                options.selector = sel;
                options.alpha = alpha;
                options.counts = counts;
                options.classifier = clf;
                options.knn_k = knn_k;
                auto cells = cross_domain_validation(corpus, options);
                for (const XvalCell& cell : cells) {
                    TrialRecord rec;
                    rec.index = cs;
                    rec.seed = derive_seed(seed, cs);
                    rec.balanced_error = cell.mean_balanced_error;
                    std::ostringstream note;
                    note << (sel == Selector::fsus ? "fsus" : "baseline") << ','
                         << (clf == Classifier::knn ? "knn" : "centroid") << ",count="
                         << cell.count;
                    rec.note = note.str();
                    per_seed[cs].push_back(std::move(rec));
                }
            }
        }
    });

    std::uint64_t next_index = 0;
    for (auto& batch : per_seed)
        for (TrialRecord& rec : batch) {
            rec.index = next_index++;
            report.trials.push_back(rec);
        }

    for (const TrialRecord& rec : report.trials) {
        Key key{rec.note.rfind("fsus,", 0) == 0 ? Selector::fsus : Selector::baseline,
                rec.note.find(",knn,") != std::string::npos ? Classifier::knn
                                                            : Classifier::centroid,
                static_cast<std::uint32_t>(
                    std::stoul(rec.note.substr(rec.note.find("count=") + 6)))};
        sums[key] += rec.balanced_error;
    }

    report.passed = true;
    std::ostringstream detail;
    for (Classifier clf : {Classifier::knn, Classifier::centroid}) {
        for (std::uint32_t count : counts) {
            const double base =
                sums[{Selector::baseline, clf, count}] / corpus_seeds;
            const double fsus = sums[{Selector::fsus, clf, count}] / corpus_seeds;
            const bool better = fsus < base;
            report.passed = report.passed && better;
            detail << (clf == Classifier::knn ? "knn" : "cen") << "/" << count
                   << ": fsus=" << fsus << (better ? " < " : " >= ") << "base=" << base
                   << "; ";
        }
    }
    report.detail = detail.str();
    return report;
}

} // namespace

TrialReport run_suite(std::string_view suite, const Config& cfg) {
    const auto started = std::chrono::steady_clock::now();
    TrialReport report;
    if (suite == "dtree") report = run_dtree_suite(cfg);
    else if (suite == "massart") report = run_massart_suite(cfg);
    else if (suite == "fud") report = run_fud_suite(cfg);
    else if (suite == "lemma1") report = run_lemma1_suite(cfg);
    else if (suite == "fsus") report = run_fsus_suite(cfg);
    else throw invalid_input("run_suite: unknown suite '" + std::string(suite) + "'");
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

namespace {

void subsets_of(std::uint32_t total, std::uint32_t k, std::vector<std::uint32_t>& scratch,
                std::uint32_t from, const std::function<void(std::span<const std::uint32_t>)>& fn) {
    if (scratch.size() == k) {
        fn(scratch);
        return;
    }
    for (std::uint32_t i = from; i < total; ++i) {
        scratch.push_back(i);
        subsets_of(total, k, scratch, i + 1, fn);
        scratch.pop_back();
    }
}

bool has_both_classes(std::span<const Example> examples) {
    bool saw0 = false, saw1 = false;
    for (const Example& ex : examples) {
        (ex.y ? saw1 : saw0) = true;
        if (saw0 && saw1) return true;
    }
    return false;
}

std::vector<Example> project_all(std::span<const Example> examples,
                                 std::span<const std::uint32_t> mask) {
    std::vector<Example> out;
    out.reserve(examples.size());
    for (const Example& ex : examples) {
        Example p;
        p.x = BitVec(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) p.x.set(i, ex.x.get(mask[i]));
        p.y = ex.y;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

std::vector<XvalCell> cross_domain_validation(const BagOfWordsCorpus& corpus,
                                              const XvalOptions& options) {
    corpus.validate();
    const std::vector<std::uint32_t> domains = corpus.domain_ids();
    const auto D = static_cast<std::uint32_t>(domains.size());
    const std::uint32_t K = options.train_domains;
    if (K < 1 || D < K + 1)
        throw invalid_input("cross_domain_validation: need at least K+1 distinct domains");
    const auto n = static_cast<std::uint32_t>(corpus.vocabulary.size());

    std::vector<XvalCell> cells;
    for (std::uint32_t count : options.counts) cells.push_back({count, 0.0, 0, 0});
    std::vector<double> sums(options.counts.size(), 0.0);

    std::vector<std::uint32_t> scratch;
    subsets_of(D, K, scratch, 0, [&](std::span<const std::uint32_t> subset_idx) {
        std::vector<std::uint32_t> train_domains;
        for (std::uint32_t i : subset_idx) train_domains.push_back(domains[i]);
        std::set<std::uint32_t> train_set(train_domains.begin(), train_domains.end());

        std::vector<Dataset> datasets = corpus_datasets(corpus, train_domains);
        std::vector<Example> pool;
        for (const Dataset& ds : datasets)
            pool.insert(pool.end(), ds.examples.begin(), ds.examples.end());
        if (!has_both_classes(pool)) {
            for (auto& cell : cells) cell.skipped += D - K; // every held-out pair skipped
            return;
        }

        auto table = featsel::correlation_table(datasets, n);
        auto pooled = featsel::pooled_correlations(datasets, n);
        const double alpha = options.selector == Selector::fsus ? options.alpha : 0.0;
        auto scores = featsel::fsus_scores(table, pooled, alpha);

        for (std::size_t ci = 0; ci < options.counts.size(); ++ci) {
            auto mask = featsel::select_top(scores, options.counts[ci]);
            auto train = project_all(pool, mask);
            Hypothesis clf = options.classifier == Classifier::knn
                                 ? featsel::knn_train(train, options.knn_k)
                                 : featsel::centroid_train(train);
            for (std::uint32_t z : domains) {
                if (train_set.count(z)) continue; // partition assertion
                auto holdout = domain_examples(corpus, z);
                if (!has_both_classes(holdout)) {
                    ++cells[ci].skipped;
                    continue;
                }
                auto projected = project_all(holdout, mask);
                sums[ci] += balanced_error_rate(clf, projected);
                ++cells[ci].pairs;
            }
        }
    });

    for (std::size_t ci = 0; ci < cells.size(); ++ci)
        if (cells[ci].pairs > 0) cells[ci].mean_balanced_error = sums[ci] / cells[ci].pairs;
    return cells;
}

std::string xval_csv(std::span<const XvalCell> cells, const XvalOptions& options) {
    std::ostringstream out;
    out << "selector,classifier,k,count,mean_balanced_error,pairs,skipped\n";
    for (const XvalCell& cell : cells) {
        out << (options.selector == Selector::fsus ? "fsus" : "baseline") << ','
            << (options.classifier == Classifier::knn ? "knn" : "centroid") << ','
            << options.train_domains << ',' << cell.count << ','
            << format_double(cell.mean_balanced_error) << ',' << cell.pairs << ','
            << cell.skipped << '\n';
    }
    return out.str();
}

std::string emit_scatter(const featsel::CorrelationTable& table,
                         std::span<const double> pooled, double alpha, std::uint32_t count) {
    auto scores = featsel::fsus_scores(table, pooled, alpha);
    auto stdev = featsel::correlation_stdev(table);
    auto selected = featsel::select_top(scores, count);
    std::set<std::uint32_t> chosen(selected.begin(), selected.end());
    std::ostringstream out;
    out << "feature,abs_pooled,stdev,selected\n";
    for (std::uint32_t k = 0; k < table.features; ++k) {
        out << (k + 1) << ',';
        if (!std::isnan(pooled[k])) out << format_double(std::abs(pooled[k]));
        out << ',';
        if (!std::isnan(stdev[k])) out << format_double(stdev[k]);
        out << ',' << (chosen.count(k) ? 1 : 0) << '\n';
    }
    return out.str();
}

} // namespace mdl::bench
