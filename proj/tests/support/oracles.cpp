#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto keep = [](unsigned char c) {
        return std::isalnum(c) != 0 || c >= 0x80;  // C locale: ASCII alnum only
    };
    while (i < text.size()) {
        while (i < text.size() && !keep(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && keep(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            std::string tok = text.substr(start, i - start);
            for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            out.push_back(std::move(tok));
        }
    }
    return out;
}

TermStats::TermStats(const std::vector<std::string>& doc_texts) {
    for (std::size_t d = 0; d < doc_texts.size(); ++d) {
        auto tokens = tokenize(doc_texts[d]);
        doc_lens_.push_back(static_cast<std::uint32_t>(tokens.size()));
        for (const auto& t : tokens) ++tf_[t][d];
    }
}

double TermStats::avg_doc_len() const {
    double sum = 0.0;
    for (auto len : doc_lens_) sum += len;
    return doc_lens_.empty() ? 0.0 : sum / static_cast<double>(doc_lens_.size());
}

std::uint32_t TermStats::tf(const std::string& term, std::size_t doc) const {
    auto it = tf_.find(term);
    if (it == tf_.end()) return 0;
    auto jt = it->second.find(doc);
    return jt == it->second.end() ? 0 : jt->second;
}

std::uint32_t TermStats::df(const std::string& term) const {
    auto it = tf_.find(term);
    return it == tf_.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
}

double TermStats::idf(const std::string& term) const {
    double n = static_cast<double>(doc_count());
    double d = static_cast<double>(df(term));
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double TermStats::bm25(const std::vector<std::string>& query, std::size_t doc) const {
    const double k1 = 1.2, b = 0.75;
    double len = doc_lens_[doc];
    double norm = k1 * (1.0 - b + b * len / avg_doc_len());
    double score = 0.0;
    for (const auto& term : query) {
        double f = tf(term, doc);
        if (f == 0.0) continue;
        score += idf(term) * f * (k1 + 1.0) / (f + norm);
    }
    return score;
}

std::vector<std::pair<std::size_t, double>> TermStats::retrieve(const std::string& question,
                                                                std::size_t k) const {
    auto query = tokenize(question);
    if (query.empty()) return {};
    std::vector<std::pair<std::size_t, double>> hits;
    for (std::size_t d = 0; d < doc_count(); ++d) {
        double s = bm25(query, d);
        if (s > 0.0) hits.emplace_back(d, s);
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

std::optional<double> average_precision(const std::vector<int>& ranked_labels) {
    int positives = 0;
    for (int l : ranked_labels) positives += l ? 1 : 0;
    if (positives == 0) return std::nullopt;
    double sum = 0.0;
    for (std::size_t k = 0; k < ranked_labels.size(); ++k) {
        if (!ranked_labels[k]) continue;
        int hits_in_prefix = 0;
        for (std::size_t j = 0; j <= k; ++j) hits_in_prefix += ranked_labels[j] ? 1 : 0;
        sum += static_cast<double>(hits_in_prefix) / static_cast<double>(k + 1);
    }
    return sum / positives;
}

std::optional<double> reciprocal_rank(const std::vector<int>& ranked_labels) {
    for (std::size_t k = 0; k < ranked_labels.size(); ++k) {
        if (ranked_labels[k]) return 1.0 / static_cast<double>(k + 1);
    }
    return std::nullopt;
}

std::optional<int> precision_at_1(const std::vector<int>& ranked_labels) {
    for (int l : ranked_labels) {
        if (l) return ranked_labels.front() ? 1 : 0;
    }
    return std::nullopt;
}

std::pair<double, double> ap_extremes(std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    double best = 0.0, worst = 1.0;
    do {
        auto ap = average_precision(labels);
        if (!ap) return {0.0, 0.0};
        best = std::max(best, *ap);
        worst = std::min(worst, *ap);
    } while (std::next_permutation(labels.begin(), labels.end()));
    return {best, worst};
}

double token_f1(const std::string& target, const std::string& candidate) {
    auto a = tokenize(target);
    auto b = tokenize(candidate);
    if (a.empty() || b.empty()) return 0.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.empty()) return 0.0;
    double p = static_cast<double>(common.size()) / static_cast<double>(b.size());
    double r = static_cast<double>(common.size()) / static_cast<double>(a.size());
    return 2.0 * p * r / (p + r);
}

double proxy_score(const std::string& question, const std::string& reference,
                   const std::string& candidate, double alpha) {
    return alpha * token_f1(reference, candidate) + (1.0 - alpha) * token_f1(question, candidate);
}

}  // namespace oracle
