#include "mdl/corpus.hpp"

#include "mdl/config.hpp"
#include "mdl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mdl::bench {

void BagOfWordsCorpus::validate() const {
    for (std::size_t i = 0; i < documents.size(); ++i) {
        const BowDocument& doc = documents[i];
        std::uint32_t prev = 0;
        bool first = true;
        for (std::uint32_t t : doc.tokens) {
            if (t >= vocabulary.size())
                throw invalid_input("corpus: token index out of range in document " +
                                    std::to_string(i));
            if (!first && t <= prev)
                throw invalid_input("corpus: token indices must be strictly increasing "
                                    "in document " + std::to_string(i));
            prev = t;
            first = false;
        }
    }
}

std::vector<std::uint32_t> BagOfWordsCorpus::domain_ids() const {
    std::set<std::uint32_t> ids;
    for (const BowDocument& doc : documents) ids.insert(doc.domain);
    return {ids.begin(), ids.end()};
}

std::string write_corpus(const BagOfWordsCorpus& corpus) {
    std::ostringstream out;
    if (!corpus.provenance.empty()) out << "# " << corpus.provenance << '\n';
    for (const std::string& token : corpus.vocabulary) out << "#vocab " << token << '\n';
    for (const BowDocument& doc : corpus.documents) {
        out << doc.domain << '\t' << (doc.label ? 1 : 0) << '\t';
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i) out << ' ';
            out << doc.tokens[i];
        }
        out << '\n';
    }
    return out.str();
}

BagOfWordsCorpus parse_corpus(std::istream& in) {
    BagOfWordsCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) -> invalid_input {
        return invalid_input("corpus: " + why + " on line " + std::to_string(line_no));
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("#vocab ", 0) == 0) {
                std::string token = line.substr(7);
                if (token.empty()) throw fail("empty vocabulary token");
                corpus.vocabulary.push_back(token);
            }
            continue;
        }
        std::size_t tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw fail("expected <domain>\\t<label>\\t<indices>");
        std::size_t tab2 = line.find('\t', tab1 + 1);
        BowDocument doc;
        try {
            doc.domain = static_cast<std::uint32_t>(std::stoul(line.substr(0, tab1)));
            std::string label = line.substr(tab1 + 1, (tab2 == std::string::npos
                                                           ? line.size()
                                                           : tab2) - tab1 - 1);
            if (label != "0" && label != "1") throw fail("label must be 0 or 1");
            doc.label = label == "1";
        } catch (const std::logic_error&) {
            throw fail("malformed domain or label field");
        }
        if (tab2 != std::string::npos) {
            std::istringstream idx(line.substr(tab2 + 1));
            std::string tok;
            while (idx >> tok) {
                try {
                    doc.tokens.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
                } catch (const std::logic_error&) {
                    throw fail("malformed token index '" + tok + "'");
                }
            }
        }
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (doc.tokens[i] >= corpus.vocabulary.size())
                throw fail("token index " + std::to_string(doc.tokens[i]) +
                           " exceeds the vocabulary");
            if (i > 0 && doc.tokens[i] <= doc.tokens[i - 1])
                throw fail("token indices must be sorted and distinct");
        }
        corpus.documents.push_back(std::move(doc));
    }
    corpus.validate();
    return corpus;
}

BagOfWordsCorpus ingest_bow(std::istream& in, std::uint32_t min_occurrences) {
    BagOfWordsCorpus raw = parse_corpus(in);
    std::vector<std::uint32_t> doc_freq(raw.vocabulary.size(), 0);
    for (const BowDocument& doc : raw.documents)
        for (std::uint32_t t : doc.tokens) ++doc_freq[t];

    BagOfWordsCorpus filtered;
    filtered.provenance = raw.provenance;
    std::vector<std::uint32_t> remap(raw.vocabulary.size(), ~0u);
    for (std::size_t t = 0; t < raw.vocabulary.size(); ++t) {
        if (doc_freq[t] < min_occurrences) continue;
        remap[t] = static_cast<std::uint32_t>(filtered.vocabulary.size());
        filtered.vocabulary.push_back(raw.vocabulary[t]);
    }
    for (const BowDocument& doc : raw.documents) {
        BowDocument kept;
        kept.domain = doc.domain;
        kept.label = doc.label;
        for (std::uint32_t t : doc.tokens)
            if (remap[t] != ~0u) kept.tokens.push_back(remap[t]);
        filtered.documents.push_back(std::move(kept)); // empty documents retained
    }
    filtered.validate();
    return filtered;
}

BagOfWordsCorpus ingest_bow_file(const std::string& path, std::uint32_t min_occurrences) {
    std::ifstream in(path);
    if (!in) throw invalid_input("corpus: cannot open " + path);
    return ingest_bow(in, min_occurrences);
}

std::vector<DomainStats> corpus_stats(const BagOfWordsCorpus& corpus) {
    std::vector<DomainStats> stats;
    const double n = corpus.vocabulary.empty() ? 1.0 : double(corpus.vocabulary.size());
    for (std::uint32_t z : corpus.domain_ids()) {
        DomainStats s;
        s.domain = z;
        double sum = 0.0, sum0 = 0.0, sum1 = 0.0;
        std::uint32_t pages0 = 0, pages1 = 0;
        for (const BowDocument& doc : corpus.documents) {
            if (doc.domain != z) continue;
            ++s.pages;
            double mean = static_cast<double>(doc.tokens.size()) / n;
            sum += mean;
            if (doc.label) {
                ++pages1;
                sum1 += mean;
            } else {
                ++pages0;
                sum0 += mean;
            }
        }
        if (s.pages == 0) continue;
        s.positive_fraction = static_cast<double>(pages1) / s.pages;
        s.density = sum / s.pages;
        s.density_class0 = pages0 ? sum0 / pages0 : 0.0;
        s.density_class1 = pages1 ? sum1 / pages1 : 0.0;
        stats.push_back(s);
    }
    return stats;
}

std::string stats_csv(const std::vector<DomainStats>& stats) {
    std::ostringstream out;
    out << "domain,pages,positive_fraction,density,density_class0,density_class1\n";
    for (const DomainStats& s : stats) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%u,%u,%.4f,%.4f,%.4f,%.4f\n", s.domain, s.pages,
                      s.positive_fraction, s.density, s.density_class0, s.density_class1);
        out << buf;
    }
    return out.str();
}

std::vector<Example> domain_examples(const BagOfWordsCorpus& corpus, std::uint32_t domain) {
    std::vector<Example> out;
    const std::size_t n = corpus.vocabulary.size();
    for (const BowDocument& doc : corpus.documents) {
        if (doc.domain != domain) continue;
        Example ex;
        ex.x = BitVec(n);
        for (std::uint32_t t : doc.tokens) ex.x.set(t, true);
        ex.y = doc.label;
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<Dataset> corpus_datasets(const BagOfWordsCorpus& corpus,
                                     std::span<const std::uint32_t> domains) {
    std::vector<Dataset> out;
    for (std::uint32_t z : domains) out.push_back(Dataset{domain_examples(corpus, z)});
    return out;
}

namespace {

/// XOR-channel parameter hitting a target correlation at label bias pi.
double q_for(double rho, double pi) {
    double t = rho / (2.0 * std::sqrt(pi * (1.0 - pi) + rho * rho * (pi - 0.5) * (pi - 0.5)));
    return (1.0 - t) / 2.0;
}

} // namespace

BagOfWordsCorpus universities_mimic(std::uint64_t seed, const MimicParams& params) {
    if (params.domain_sizes.size() != params.domain_bias.size() || params.domain_sizes.empty())
        throw invalid_input("universities_mimic: one bias per domain required");
    const auto D = static_cast<std::uint32_t>(params.domain_sizes.size());
    const std::uint32_t n =
        params.robust_features + params.idio_features + params.noise_features;

    SplitMix64 profile_rng(derive_seed(seed, "mimic-profile"));
    // rho_target[k][z]; robust features share one value across domains
    std::vector<std::vector<double>> rho(n, std::vector<double>(D, 0.0));
    for (std::uint32_t k = 0; k < params.robust_features; ++k) {
        double mag = profile_rng.uniform(params.robust_rho_lo, params.robust_rho_hi);
        double value = profile_rng.bernoulli(0.5) ? mag : -mag;
        for (std::uint32_t z = 0; z < D; ++z) rho[k][z] = value;
    }
    for (std::uint32_t j = 0; j < params.idio_features; ++j) {
        const std::uint32_t k = params.robust_features + j;
        for (std::uint32_t z = 0; z < D; ++z) {
            if (!profile_rng.bernoulli(params.idio_strong_prob)) continue;
            double mag = profile_rng.uniform(params.idio_rho_lo, params.idio_rho_hi);
            rho[k][z] = profile_rng.bernoulli(0.5) ? mag : -mag;
        }
    }
    // remaining features stay at correlation 0 (q = 1/2, pure coin flips)

    BagOfWordsCorpus corpus;
    corpus.provenance = "synthetic university-webpages mimic (seed " + std::to_string(seed) + ")";
    corpus.vocabulary.reserve(n);
    for (std::uint32_t k = 0; k < n; ++k) {
        char buf[16];
        const char* tag = k < params.robust_features ? "rob"
                          : k < params.robust_features + params.idio_features ? "idi"
                                                                              : "rnd";
        std::snprintf(buf, sizeof buf, "%s%04u", tag, k);
        corpus.vocabulary.push_back(buf);
    }

    SplitMix64 rng(derive_seed(seed, "mimic-docs"));
    for (std::uint32_t z = 0; z < D; ++z) {
        const double pi = params.domain_bias[z];
        std::vector<double> q(n);
        for (std::uint32_t k = 0; k < n; ++k) q[k] = q_for(rho[k][z], pi);
        for (std::uint32_t doc_i = 0; doc_i < params.domain_sizes[z]; ++doc_i) {
            BowDocument doc;
            doc.domain = z;
            doc.label = rng.bernoulli(pi);
            for (std::uint32_t k = 0; k < n; ++k) {
                bool bit = doc.label != rng.bernoulli(q[k]);
                if (bit) doc.tokens.push_back(k);
            }
            corpus.documents.push_back(std::move(doc));
        }
    }
    corpus.validate();
    return corpus;
}

} // namespace mdl::bench
