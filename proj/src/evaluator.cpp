#include "rws/evaluator.hpp"

#include <algorithm>
#include <unordered_map>

#include "rws/errors.hpp"
#include "rws/tokenize.hpp"

namespace rws {

namespace {

std::unordered_map<std::string, std::uint32_t> token_counts(std::string_view text) {
    std::unordered_map<std::string, std::uint32_t> counts;
    for (auto& tok : tokenize(text)) ++counts[std::move(tok)];
    return counts;
}

}  // namespace

double token_f1(std::string_view target, std::string_view candidate) {
    auto target_counts = token_counts(target);
    auto cand_counts = token_counts(candidate);
    std::size_t target_total = 0;
    for (const auto& [_, c] : target_counts) target_total += c;
    std::size_t cand_total = 0;
    for (const auto& [_, c] : cand_counts) cand_total += c;
    if (target_total == 0 || cand_total == 0) return 0.0;

    std::size_t overlap = 0;
    for (const auto& [tok, c] : target_counts) {
        auto it = cand_counts.find(tok);
        if (it != cand_counts.end()) overlap += std::min(c, it->second);
    }
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
    double recall = static_cast<double>(overlap) / static_cast<double>(target_total);
    return 2.0 * precision * recall / (precision + recall);
}

double proxy_eval_score(std::string_view question, std::string_view reference,
                        std::string_view candidate_text, double alpha) {
    return alpha * token_f1(reference, candidate_text) +
           (1.0 - alpha) * token_f1(question, candidate_text);
}

int threshold_label(double eval_score, double threshold) {
    return eval_score >= threshold ? 1 : 0;
}

std::vector<LabeledPair> label_candidates(const ReferenceGroup& group,
                                          const std::vector<Candidate>& candidates,
                                          const EvaluatorSpec& spec, const ScoringClient* client) {
    std::vector<double> scores(candidates.size(), 0.0);
    if (spec.kind == EvaluatorKind::proxy) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            double best = 0.0;
            for (const std::string& reference : group.references) {
                best = std::max(best,
                                proxy_eval_score(group.question, reference, candidates[i].text, spec.alpha));
            }
            scores[i] = best;
        }
    } else {
        if (!client) throw ConfigError("external evaluator requires a scoring client");
        std::vector<std::string> texts;
        texts.reserve(candidates.size());
        for (const Candidate& c : candidates) texts.push_back(c.text);
        for (const std::string& reference : group.references) {
            std::vector<double> ref_scores = client->score(group.question, reference, texts);
            for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = std::max(scores[i], ref_scores[i]);
        }
    }

    std::vector<LabeledPair> out;
    out.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        LabeledPair pair;
        pair.qid = group.qid;
        pair.question = group.question;
        pair.answer = candidates[i].text;
        pair.eval_score = scores[i];
        pair.label = threshold_label(scores[i], spec.threshold);
        pair.doc_id = candidates[i].doc_id;
        pair.sent_idx = candidates[i].sent_idx;
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace rws
