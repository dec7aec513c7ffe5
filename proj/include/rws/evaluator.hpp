#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rws/candidates.hpp"
#include "rws/scoring_client.hpp"

namespace rws {

struct ReferencePair {
    std::string qid;
    std::string question;
    std::string reference;
};

// One question with every reference supplied for it; duplicate qids in the
// input collapse into this.
struct ReferenceGroup {
    std::string qid;
    std::string question;
    std::vector<std::string> references;
};

struct LabeledPair {
    std::string qid;
    std::string question;
    std::string answer;
    double eval_score = 0.0;  // in [0,1]
    int label = 0;            // 1 iff eval_score >= threshold
    std::uint64_t doc_id = 0;
    std::uint32_t sent_idx = 0;
};

enum class EvaluatorKind { proxy, external };

struct EvaluatorSpec {
    EvaluatorKind kind = EvaluatorKind::proxy;
    std::string endpoint;         // external only
    std::size_t batch_size = 64;  // external only
    double alpha = 0.75;          // proxy only: weight of reference similarity
    double threshold = 0.9;       // inclusive: score >= threshold labels positive
};

// Harmonic mean of token-multiset precision and recall; precision is taken
// against `candidate`, recall against `target`. 0 when either side has no
// tokens.
double token_f1(std::string_view target, std::string_view candidate);

// alpha * F1(reference, candidate) + (1 - alpha) * F1(question, candidate).
double proxy_eval_score(std::string_view question, std::string_view reference,
                        std::string_view candidate_text, double alpha);

// 1 iff eval_score >= threshold ("at least" semantics, inclusive boundary).
int threshold_label(double eval_score, double threshold);

// One LabeledPair per candidate, in candidate order. With several references
// the maximum score over references is kept. `client` is required for (and
// only used by) the external kind.
std::vector<LabeledPair> label_candidates(const ReferenceGroup& group,
                                          const std::vector<Candidate>& candidates,
                                          const EvaluatorSpec& spec,
                                          const ScoringClient* client = nullptr);

}  // namespace rws
