#include "rws/candidates.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "rws/errors.hpp"
#include "rws/tokenize.hpp"

namespace rws {

std::vector<Candidate> pool_candidates(const std::string& qid, const std::vector<ScoredDoc>& retrieved,
                                       const DocumentStore& store, const SegmenterOptions& seg) {
    std::vector<Candidate> pool;
    std::unordered_set<std::string> seen;
    for (std::size_t rank = 0; rank < retrieved.size(); ++rank) {
        const ScoredDoc& hit = retrieved[rank];
        const Document& doc = store.get(hit.doc_id);
        for (Sentence& sent : segment_sentences(doc, seg)) {
            if (!seen.insert(sent.text).second) continue;  // exact-text dedup, first wins
            Candidate c;
            c.qid = qid;
            c.doc_id = sent.doc_id;
            c.sent_idx = sent.sent_idx;
            c.text = std::move(sent.text);
            c.retrieval_score = hit.score;
            c.retrieval_rank = rank;
            pool.push_back(std::move(c));
        }
    }
    return pool;
}

double lexical_rerank_score(std::string_view question, std::string_view candidate_text,
                            const InvertedIndex& index) {
    std::vector<std::string> q_tokens = tokenize(question);
    if (q_tokens.empty()) return 0.0;
    std::sort(q_tokens.begin(), q_tokens.end());
    q_tokens.erase(std::unique(q_tokens.begin(), q_tokens.end()), q_tokens.end());

    std::vector<std::string> c_tokens = tokenize(candidate_text);
    std::unordered_set<std::string> c_set(c_tokens.begin(), c_tokens.end());

    double covered = 0.0;
    double total = 0.0;
    for (const std::string& t : q_tokens) {
        double w = index.idf(t);
        total += w;
        if (c_set.count(t)) covered += w;
    }
    return total > 0.0 ? covered / total : 0.0;
}

void lexical_rerank(std::string_view question, std::vector<Candidate>& candidates,
                    const InvertedIndex& index) {
    for (Candidate& c : candidates) {
        c.rerank_score = lexical_rerank_score(question, c.text, index);
    }
}

void external_rerank(const std::string& question, std::vector<Candidate>& candidates,
                     const RerankerSpec& spec, const ScoringClient::Options& client_options) {
    if (spec.kind != RerankerKind::external)
        throw ConfigError("external_rerank called with a non-external reranker spec");
    if (candidates.empty()) return;
    ScoringClient client(spec.endpoint, spec.batch_size, client_options);
    std::vector<std::string> texts;
    texts.reserve(candidates.size());
    for (const Candidate& c : candidates) texts.push_back(c.text);
    std::vector<double> scores = client.score(question, std::nullopt, texts);
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].rerank_score = scores[i];
}

std::vector<Candidate> select_topk2(std::vector<Candidate> candidates, std::size_t k2) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.rerank_score != b.rerank_score) return a.rerank_score > b.rerank_score;
        if (a.retrieval_score != b.retrieval_score) return a.retrieval_score > b.retrieval_score;
        if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
        return a.sent_idx < b.sent_idx;
    });
    if (candidates.size() > k2) candidates.resize(k2);
    return candidates;
}

}  // namespace rws
