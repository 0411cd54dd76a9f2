// mdlearn: benchmark CLI for the multi-domain learning library.
//
// Subcommands:
//   gen      write synthetic corpus / sample / generator-spec files
//   run      execute an experiment suite and write its report
//   xval     cross-domain validation on a corpus file
//   scatter  correlation-vs-stability scatter data (CSV)
//   ingest   corpus statistics after ingestion
//
// Exit codes: 0 pass, 1 acceptance failure, 2 usage or input error.

#include "mdl/bench.hpp"
#include "mdl/config.hpp"
#include "mdl/corpus.hpp"
#include "mdl/featsel.hpp"
#include "mdl/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#ifndef MDL_CONFIG_DIR
#define MDL_CONFIG_DIR "configs"
#endif

namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& content) {
    if (auto parent = fs::path(path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw mdl::invalid_input("cannot write " + path);
    out << content;
}

std::string sample_to_text(const mdl::synth::TrainingDraw& draw) {
    std::ostringstream out;
    out << "n " << draw.sample.dimension << '\n';
    for (std::size_t i = 0; i < draw.sample.datasets.size(); ++i) {
        const auto& ds = draw.sample.datasets[i];
        // the domain tag is oracle metadata, not learner input
        out << "dataset " << i << ' ' << ds.size() << " # domain " << draw.domains[i] << '\n';
        for (const mdl::Example& ex : ds.examples)
            out << (ex.y ? 1 : 0) << ' ' << ex.x.to_string() << '\n';
    }
    return out.str();
}

int cmd_gen(const std::string& what, const std::string& spec_path, std::uint64_t seed,
            std::uint32_t d, std::uint32_t m, std::uint32_t n, std::uint32_t s, double skew,
            const std::string& out_path) {
    if (what == "corpus") {
        auto corpus = mdl::bench::universities_mimic(seed);
        write_file(out_path, mdl::bench::write_corpus(corpus));
    } else if (what == "sample") {
        if (spec_path.empty()) throw mdl::invalid_input("gen sample needs --spec");
        auto spec = mdl::synth::parse_spec(mdl::Config::load(spec_path));
        spec.seed = seed ? seed : spec.seed;
        write_file(out_path, sample_to_text(mdl::synth::sample_training(spec, d, m)));
    } else if (what == "dtspec") {
        auto spec = mdl::synth::random_dtspec(seed, n, s, skew);
        write_file(out_path, mdl::synth::write_spec(spec).write());
    } else {
        throw mdl::invalid_input("gen: unknown kind '" + what + "' (corpus|sample|dtspec)");
    }
    std::cout << "wrote " << out_path << '\n';
    return 0;
}

int cmd_run(const std::string& suite, const std::string& config_path, std::int64_t seed,
            std::int64_t trials, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
    std::string path = config_path;
    if (path.empty()) path = std::string(MDL_CONFIG_DIR) + "/" + suite + ".cfg";
    mdl::Config cfg = mdl::Config::load(path);
    if (seed >= 0) cfg.set("seed", static_cast<std::uint64_t>(seed));
    if (trials >= 0) cfg.set("trials", static_cast<std::uint64_t>(trials));
    for (const std::string& kv : overrides) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw mdl::invalid_input("run: --set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    mdl::bench::TrialReport report = mdl::bench::run_suite(suite, cfg);
    if (!out_dir.empty()) {
        write_file(out_dir + "/report.json", report.to_json().dump(2) + "\n");
        write_file(out_dir + "/trials.csv", report.trials_csv());
    }
    std::cout << report.experiment << ": " << (report.passed ? "PASS" : "FAIL") << ": "
              << report.detail << " (" << report.trials.size() << " records, "
              << report.runtime_seconds << "s)\n";
    return report.passed ? 0 : 1;
}

int cmd_xval(const std::string& corpus_path, std::uint32_t k, const std::string& selector,
             double alpha, const std::vector<std::uint32_t>& counts,
             const std::string& classifier, std::uint32_t knn_k, std::uint32_t min_occ,
             const std::string& out_path) {
    auto corpus = mdl::bench::ingest_bow_file(corpus_path, min_occ);
    mdl::bench::XvalOptions options;
    options.train_domains = k;
    options.selector = selector == "fsus" ? mdl::bench::Selector::fsus
                                          : mdl::bench::Selector::baseline;
    if (selector != "fsus" && selector != "fs-baseline" && selector != "baseline")
        throw mdl::invalid_input("xval: selector must be fs-baseline or fsus");
    options.alpha = alpha;
    if (!counts.empty()) options.counts = counts;
    if (classifier == "knn") options.classifier = mdl::bench::Classifier::knn;
    else if (classifier == "centroid") options.classifier = mdl::bench::Classifier::centroid;
    else throw mdl::invalid_input("xval: classifier must be knn or centroid");
    options.knn_k = knn_k;

    auto cells = mdl::bench::cross_domain_validation(corpus, options);
    std::string csv = mdl::bench::xval_csv(cells, options);
    if (out_path.empty()) std::cout << csv;
    else {
        write_file(out_path, csv);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int cmd_scatter(const std::string& corpus_path, double alpha, std::uint32_t count,
                std::uint32_t min_occ, const std::string& out_path) {
    auto corpus = mdl::bench::ingest_bow_file(corpus_path, min_occ);
    auto domains = corpus.domain_ids();
    auto datasets = mdl::bench::corpus_datasets(corpus, domains);
    const auto n = static_cast<std::uint32_t>(corpus.vocabulary.size());
    auto table = mdl::featsel::correlation_table(datasets, n);
    auto pooled = mdl::featsel::pooled_correlations(datasets, n);
    std::string csv = mdl::bench::emit_scatter(table, pooled, alpha, count);
    if (out_path.empty()) std::cout << csv;
    else {
        write_file(out_path, csv);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

int cmd_ingest(const std::string& corpus_path, std::uint32_t min_occ,
               const std::string& out_path) {
    auto corpus = mdl::bench::ingest_bow_file(corpus_path, min_occ);
    auto stats = mdl::bench::corpus_stats(corpus);
    std::string csv = mdl::bench::stats_csv(stats);
    std::cout << "vocabulary: " << corpus.vocabulary.size() << " tokens, "
              << corpus.documents.size() << " documents\n";
    if (out_path.empty()) std::cout << csv;
    else {
        write_file(out_path, csv);
        std::cout << "wrote " << out_path << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-domain learning benchmarks"};
    app.require_subcommand(1);

    std::string what = "corpus", spec_path, out_path = "out.txt";
    std::uint64_t gseed = 1;
    std::uint32_t gd = 10, gm = 100, gn = 20, gs = 8;
    double gskew = 1.0;
    auto* gen = app.add_subcommand("gen", "write synthetic corpus/sample/spec files");
    gen->add_option("--kind", what, "corpus|sample|dtspec")->capture_default_str();
    gen->add_option("--spec", spec_path, "generator spec file (for --kind sample)");
    gen->add_option("--seed", gseed, "seed")->capture_default_str();
    gen->add_option("--d", gd, "datasets (sample)")->capture_default_str();
    gen->add_option("--m", gm, "examples per dataset (sample)")->capture_default_str();
    gen->add_option("--n", gn, "dimension (dtspec)")->capture_default_str();
    gen->add_option("--s", gs, "leaves (dtspec)")->capture_default_str();
    gen->add_option("--skew", gskew, "leaf-probability concentration")->capture_default_str();
    gen->add_option("--out", out_path, "output path")->capture_default_str();

    std::string suite, run_config, run_out;
    std::int64_t run_seed = -1, run_trials = -1;
    std::vector<std::string> run_sets;
    auto* run = app.add_subcommand("run", "run an experiment suite");
    run->add_option("suite", suite, "dtree|massart|fud|lemma1|fsus")->required();
    run->add_option("--config", run_config, "config file (default: configs/<suite>.cfg)");
    run->add_option("--seed", run_seed, "override config seed");
    run->add_option("--trials", run_trials, "override config trials");
    run->add_option("--set", run_sets, "override any config key (key=value, repeatable)");
    run->add_option("--out", run_out, "directory for report.json and trials.csv");

    std::string xcorpus, xselector = "fs-baseline", xclassifier = "knn", xout;
    std::uint32_t xk = 1, xknn = 5, xmin = 50;
    double xalpha = 2.0;
    std::vector<std::uint32_t> xcounts;
    auto* xval = app.add_subcommand("xval", "cross-domain validation");
    xval->add_option("--corpus", xcorpus, "corpus file")->required();
    xval->add_option("--k", xk, "training domains per split")->required();
    xval->add_option("--selector", xselector, "fs-baseline|fsus")->capture_default_str();
    xval->add_option("--alpha", xalpha, "fsus regularizer")->capture_default_str();
    xval->add_option("--counts", xcounts, "feature counts")->delimiter(',');
    xval->add_option("--classifier", xclassifier, "knn|centroid")->capture_default_str();
    xval->add_option("--knn-k", xknn, "kNN neighbor count")->capture_default_str();
    xval->add_option("--min-occurrences", xmin, "ingest filter")->capture_default_str();
    xval->add_option("--out", xout, "output CSV path (stdout if empty)");

    std::string scorpus, sout;
    double salpha = 2.0;
    std::uint32_t scount = 50, smin = 50;
    auto* scatter = app.add_subcommand("scatter", "correlation/stability scatter CSV");
    scatter->add_option("--corpus", scorpus, "corpus file")->required();
    scatter->add_option("--alpha", salpha, "selection slope")->capture_default_str();
    scatter->add_option("--count", scount, "selected feature count")->capture_default_str();
    scatter->add_option("--min-occurrences", smin, "ingest filter")->capture_default_str();
    scatter->add_option("--out", sout, "output CSV path (stdout if empty)");

    std::string icorpus, iout;
    std::uint32_t imin = 50;
    auto* ingest = app.add_subcommand("ingest", "corpus statistics");
    ingest->add_option("--corpus", icorpus, "corpus file")->required();
    ingest->add_option("--min-occurrences", imin, "ingest filter")->capture_default_str();
    ingest->add_option("--out", iout, "output CSV path (stdout if empty)");

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            return cmd_gen(what, spec_path, gseed, gd, gm, gn, gs, gskew, out_path);
        if (run->parsed())
            return cmd_run(suite, run_config, run_seed, run_trials, run_sets, run_out);
        if (xval->parsed())
            return cmd_xval(xcorpus, xk, xselector, xalpha, xcounts, xclassifier, xknn, xmin,
                            xout);
        if (scatter->parsed()) return cmd_scatter(scorpus, salpha, scount, smin, sout);
        if (ingest->parsed()) return cmd_ingest(icorpus, imin, iout);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const mdl::invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
