#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rws {

struct RankedEntry {
    double score = 0.0;
    int label = 0;
};

// Entries of one question ordered by score descending; ties keep insertion
// order, so the caller's (deterministic) order is the tie rule.
class RankedList {
public:
    RankedList(std::string qid, std::vector<RankedEntry> entries);

    const std::string& qid() const { return qid_; }
    const std::vector<RankedEntry>& entries() const { return entries_; }
    bool has_positive() const;

private:
    std::string qid_;
    std::vector<RankedEntry> entries_;
};

struct MetricReport {
    double p_at_1 = 0.0;
    double map = 0.0;
    double mrr = 0.0;
    std::uint64_t num_questions_scored = 0;
    std::uint64_t num_questions_skipped = 0;  // questions with no positive label
};

// Per-question components; nullopt when the list has no positive label
// (skipped, not scored as zero).
std::optional<double> average_precision(const RankedList& list);
std::optional<double> reciprocal_rank(const RankedList& list);
std::optional<int> precision_at_1(const RankedList& list);

// Unweighted means over scorable lists. Throws when no list is scorable.
MetricReport aggregate(std::span<const RankedList> lists);

// CLI helper: joins a score file (qid <tab> answer <tab> score) against a
// gold interchange TSV on (qid, answer) and aggregates. Unmatched rows on
// either side are errors.
MetricReport grade_files(const std::filesystem::path& gold_path,
                         const std::filesystem::path& scores_path);

std::string to_json(const MetricReport& report);

}  // namespace rws
