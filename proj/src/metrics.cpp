#include "rws/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rws/dataset.hpp"
#include "rws/errors.hpp"

namespace rws {

RankedList::RankedList(std::string qid, std::vector<RankedEntry> entries)
    : qid_(std::move(qid)), entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("RankedList must be non-empty (qid " + qid_ + ")");
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const RankedEntry& a, const RankedEntry& b) { return a.score > b.score; });
}

bool RankedList::has_positive() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const RankedEntry& e) { return e.label != 0; });
}

std::optional<double> average_precision(const RankedList& list) {
    if (!list.has_positive()) return std::nullopt;
    double sum = 0.0;
    std::size_t positives_seen = 0;
    const auto& entries = list.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].label) {
            ++positives_seen;
            sum += static_cast<double>(positives_seen) / static_cast<double>(k + 1);
        }
    }
    return sum / static_cast<double>(positives_seen);
}

std::optional<double> reciprocal_rank(const RankedList& list) {
    const auto& entries = list.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].label) return 1.0 / static_cast<double>(k + 1);
    }
    return std::nullopt;
}

std::optional<int> precision_at_1(const RankedList& list) {
    if (!list.has_positive()) return std::nullopt;
    return list.entries().front().label ? 1 : 0;
}

MetricReport aggregate(std::span<const RankedList> lists) {
    MetricReport report;
    double ap_sum = 0.0, rr_sum = 0.0, p1_sum = 0.0;
    for (const RankedList& list : lists) {
        auto ap = average_precision(list);
        if (!ap) {
            ++report.num_questions_skipped;
            continue;
        }
        ap_sum += *ap;
        rr_sum += *reciprocal_rank(list);
        p1_sum += static_cast<double>(*precision_at_1(list));
        ++report.num_questions_scored;
    }
    if (report.num_questions_scored == 0)
        throw Error("no scorable question: every ranked list lacks a positive label");
    double n = static_cast<double>(report.num_questions_scored);
    report.map = ap_sum / n;
    report.mrr = rr_sum / n;
    report.p_at_1 = p1_sum / n;
    return report;
}

MetricReport grade_files(const std::filesystem::path& gold_path,
                         const std::filesystem::path& scores_path) {
    Dataset gold = load_as2_tsv(gold_path);

    std::ifstream in(scores_path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + scores_path.string());
    std::map<std::pair<std::string, std::string>, double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw ParseError("expected qid <tab> answer <tab> score", line_no);
        std::string qid = line.substr(0, tab1);
        std::string answer = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string score_str = line.substr(tab2 + 1);
        try {
            std::size_t consumed = 0;
            double score = std::stod(score_str, &consumed);
            if (consumed != score_str.size()) throw std::invalid_argument(score_str);
            if (!scores.emplace(std::make_pair(std::move(qid), std::move(answer)), score).second)
                throw ParseError("duplicate (qid, answer) in score file", line_no);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad score \"" + score_str + "\"", line_no);
        } catch (const std::out_of_range&) {
            throw ParseError("bad score \"" + score_str + "\"", line_no);
        }
    }

    std::vector<RankedList> lists;
    std::size_t matched = 0;
    for (const auto& group : gold) {
        std::vector<RankedEntry> entries;
        entries.reserve(group.records.size());
        for (const auto& rec : group.records) {
            auto it = scores.find({rec.qid, rec.answer});
            if (it == scores.end())
                throw Error("no score for qid \"" + rec.qid + "\" answer \"" + rec.answer + "\"");
            entries.push_back({it->second, rec.label});
            ++matched;
        }
        lists.emplace_back(group.qid, std::move(entries));
    }
    if (matched != scores.size())
        throw Error(std::to_string(scores.size() - matched) +
                    " score rows match no gold (qid, answer) row");
    return aggregate(lists);
}

std::string to_json(const MetricReport& report) {
    nlohmann::json j;
    j["p_at_1"] = report.p_at_1;
    j["map"] = report.map;
    j["mrr"] = report.mrr;
    j["num_questions_scored"] = report.num_questions_scored;
    j["num_questions_skipped"] = report.num_questions_skipped;
    return j.dump(2);
}

}  // namespace rws
