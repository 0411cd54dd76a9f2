#pragma once

#include "mdl/types.hpp"

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace mdl::bench {

/// One webpage-style document: a sorted set of distinct token indices
/// (presence, not counts), a binary label, and the domain it came from.
struct BowDocument {
    std::uint32_t domain = 0;
    bool label = false;
    std::vector<std::uint32_t> tokens; // strictly increasing, < vocabulary size
};

// File format (line-delimited text):
//   #vocab <token>                        vocabulary, in index order
//   <domain>\t<label>\t<sorted indices>   one document per line
// Other '#' lines are comments. An empty index list is a valid document.
struct BagOfWordsCorpus {
    std::vector<std::string> vocabulary;
    std::vector<BowDocument> documents;
    std::string provenance;

    void validate() const;
    std::vector<std::uint32_t> domain_ids() const; // distinct, sorted
};

std::string write_corpus(const BagOfWordsCorpus& corpus);

/// Raw parse of the documented format; malformed lines report their number.
BagOfWordsCorpus parse_corpus(std::istream& in);

/// Parse, drop tokens occurring in fewer than min_occurrences documents,
/// remap indices, binarize (presence already implies 1). Documents are kept
/// even when the filter empties them.
BagOfWordsCorpus ingest_bow(std::istream& in, std::uint32_t min_occurrences = 50);
BagOfWordsCorpus ingest_bow_file(const std::string& path, std::uint32_t min_occurrences = 50);

struct DomainStats {
    std::uint32_t domain = 0;
    std::uint32_t pages = 0;
    double positive_fraction = 0.0;
    double density = 0.0;       // mean of per-document mean vectors
    double density_class0 = 0.0;
    double density_class1 = 0.0;
};

std::vector<DomainStats> corpus_stats(const BagOfWordsCorpus& corpus);
std::string stats_csv(const std::vector<DomainStats>& stats);

/// Dense examples of one domain over the full vocabulary dimension.
std::vector<Example> domain_examples(const BagOfWordsCorpus& corpus, std::uint32_t domain);

/// One dataset per listed domain.
std::vector<Dataset> corpus_datasets(const BagOfWordsCorpus& corpus,
                                     std::span<const std::uint32_t> domains);

/// Synthetic stand-in for the university-webpages experiment: a handful of
/// domains with Table-1-like sizes, train-domain class balance near 20% and a
/// shifted test domain near 47%, robust features correlated with the label
/// identically everywhere, idiosyncratic features strongly correlated in a
/// random subset of domains and uncorrelated elsewhere, plus pure noise
/// features. Per-feature correlations are hit exactly via the analytic
/// XOR-channel construction.
struct MimicParams {
    std::uint32_t robust_features = 30;
    std::uint32_t idio_features = 45;
    std::uint32_t noise_features = 45;
    std::vector<std::uint32_t> domain_sizes = {162, 194, 157, 198, 180};
    std::vector<double> domain_bias = {0.21, 0.24, 0.20, 0.21, 0.47};
    double robust_rho_lo = 0.25, robust_rho_hi = 0.55;
    double idio_rho_lo = 0.55, idio_rho_hi = 0.85;
    double idio_strong_prob = 0.6;
};

BagOfWordsCorpus universities_mimic(std::uint64_t seed, const MimicParams& params = {});

} // namespace mdl::bench
