#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rws/corpus.hpp"
#include "rws/index.hpp"
#include "rws/scoring_client.hpp"

namespace rws {

struct Candidate {
    std::string qid;
    std::uint64_t doc_id = 0;
    std::uint32_t sent_idx = 0;
    std::string text;
    double retrieval_score = 0.0;     // BM25 of the source document
    std::size_t retrieval_rank = 0;   // 0-based rank of the source document
    double rerank_score = 0.0;        // in [0,1] once reranked
};

enum class RerankerKind { lexical, external };

struct RerankerSpec {
    RerankerKind kind = RerankerKind::lexical;
    std::string endpoint;         // external only
    std::size_t batch_size = 64;  // external only
};

// All sentences of the retrieved documents, in (retrieval rank, sent_idx)
// order, deduplicated by exact text (first provenance wins). Scores unset.
std::vector<Candidate> pool_candidates(const std::string& qid, const std::vector<ScoredDoc>& retrieved,
                                       const DocumentStore& store, const SegmenterOptions& seg = {});

// IDF-weighted coverage of the question's distinct tokens by the candidate;
// 0 when the question has no tokens, 1 when every distinct token appears.
double lexical_rerank_score(std::string_view question, std::string_view candidate_text,
                            const InvertedIndex& index);

void lexical_rerank(std::string_view question, std::vector<Candidate>& candidates,
                    const InvertedIndex& index);

// Scores the candidates through a score protocol v1 service (reference sent
// as null), preserving candidate order. Batching, retries and clamping per
// ScoringClient.
void external_rerank(const std::string& question, std::vector<Candidate>& candidates,
                     const RerankerSpec& spec,
                     const ScoringClient::Options& client_options = ScoringClient::Options::from_env());

// Sorted by rerank_score desc, ties by (retrieval_score desc, doc_id asc,
// sent_idx asc), truncated to k2.
std::vector<Candidate> select_topk2(std::vector<Candidate> candidates, std::size_t k2);

}  // namespace rws
