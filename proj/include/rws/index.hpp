#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rws/corpus.hpp"

namespace rws {

struct Posting {
    std::uint64_t doc_id;
    std::uint32_t tf;
};

struct IndexStats {
    std::uint64_t doc_count = 0;
    double avg_doc_len = 0.0;  // exact mean of doc_lens
    std::vector<std::uint32_t> doc_lens;
};

struct ScoredDoc {
    std::uint64_t doc_id;
    double score;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

// Immutable inverted index over a DocumentStore. Postings are sorted by
// doc_id; terms come from the shared tokenizer. Queries are pure functions,
// safe for any number of concurrent readers.
class InvertedIndex {
public:
    static InvertedIndex build(const DocumentStore& store);

    // index.bin inside the store directory; see docs/FORMATS.md.
    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

    const IndexStats& stats() const { return stats_; }
    std::size_t term_count() const { return terms_.size(); }

    // Number of documents containing the term; 0 for unknown terms.
    std::uint32_t doc_frequency(std::string_view term) const;

    // ln(1 + (N - df + 0.5) / (df + 0.5)); strictly positive.
    double idf(std::string_view term) const;

    std::span<const Posting> postings(std::string_view term) const;

    // Okapi BM25 of the document against the query term list. Repeated query
    // terms contribute once per occurrence. Throws on unknown doc_id.
    double bm25_score(std::span<const std::string> query_terms, std::uint64_t doc_id,
                      const Bm25Params& params = {}) const;

    // Top-k1 documents by BM25, score descending, ties by ascending doc_id;
    // only strictly positive scores are returned. Equals exhaustive scoring
    // of every document.
    std::vector<ScoredDoc> retrieve_topk(std::string_view question, std::size_t k1,
                                         const Bm25Params& params = {}) const;

private:
    std::size_t find_term(std::string_view term) const;  // npos when absent

    std::vector<std::string> terms_;              // sorted
    std::vector<std::vector<Posting>> postings_;  // parallel to terms_
    IndexStats stats_;
};

}  // namespace rws
