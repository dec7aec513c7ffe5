#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rws/evaluator.hpp"

namespace rws {

struct AS2Record {
    std::string qid;
    std::string question;
    std::string answer;
    int label = 0;  // strictly 0 or 1
};

// Records of one question, in file order.
struct QuestionGroup {
    std::string qid;
    std::vector<AS2Record> records;
};

// Groups ordered by first appearance of their qid.
using Dataset = std::vector<QuestionGroup>;

struct DatasetStats {
    std::uint64_t num_q = 0;
    std::uint64_t num_a = 0;
    std::uint64_t num_pos = 0;
    std::uint64_t num_neg = 0;
};

enum class QuestionClass { all_plus, all_minus, clean };
enum class FilterMode { origin, without_all_minus, clean_only };
enum class OutputFormat { tsv, jsonl };

// Interchange TSV: qid <tab> question <tab> answer <tab> label, UTF-8, no
// header. Labels parse strictly as 0/1; anything else is a ParseError with
// the line number.
Dataset load_as2_tsv(const std::filesystem::path& path);
void write_as2_tsv(const Dataset& dataset, const std::filesystem::path& path);

QuestionClass classify_question(const QuestionGroup& group);
const char* to_string(QuestionClass c);

// origin: identity. without_all_minus: drop all-negative questions.
// clean_only: keep only mixed-label questions.
Dataset filter_split(const Dataset& dataset, FilterMode mode);

DatasetStats compute_stats(const Dataset& dataset);

// Pipeline output: qid, question, answer, label, eval_score, doc_id,
// sent_idx (TSV) or the same fields as jsonl. Pairs must already be in
// canonical (qid, rerank rank) order; rewriting the same pairs is
// byte-identical. Returns the number of pairs written.
std::uint64_t emit_labeled_pairs(const std::vector<LabeledPair>& pairs,
                                 const std::filesystem::path& path, OutputFormat format);

// (question, reference) input pairs: TSV qid <tab> question <tab> reference,
// or jsonl {"qid","question","reference"} when the file ends in .jsonl.
std::vector<ReferencePair> load_reference_pairs(const std::filesystem::path& path);

// Duplicate qids merge into one group (first question text wins); group
// order follows first appearance.
std::vector<ReferenceGroup> group_reference_pairs(const std::vector<ReferencePair>& pairs);

// Adapters to the interchange format. WikiQA native files are the 7-column
// tab-separated release (QuestionID, Question, DocumentID, DocumentTitle,
// SentenceID, Sentence, Label) with a header row.
Dataset convert_wikiqa_tsv(const std::filesystem::path& path);
Dataset convert_jsonl(const std::filesystem::path& path);

}  // namespace rws
