#include "rws/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rws/errors.hpp"
#include "rws/io_util.hpp"

namespace rws {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

int parse_binary_label(const std::string& s, std::size_t line_no) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ParseError("label must be 0 or 1, got \"" + s + "\"", line_no);
}

// TSV fields may not contain the separators; embedded tabs/newlines in text
// become single spaces (jsonl output keeps them verbatim).
std::string tsv_field(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c == '\t' || c == '\n') c = ' ';
    }
    return out;
}

class GroupBuilder {
public:
    void add(AS2Record rec) {
        auto it = index_.find(rec.qid);
        if (it == index_.end()) {
            index_.emplace(rec.qid, groups_.size());
            groups_.push_back({rec.qid, {}});
            groups_.back().records.push_back(std::move(rec));
        } else {
            groups_[it->second].records.push_back(std::move(rec));
        }
    }
    Dataset take() { return std::move(groups_); }

private:
    Dataset groups_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::ifstream open_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    return in;
}

bool getline_crlf(std::ifstream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

Dataset load_as2_tsv(const std::filesystem::path& path) {
    auto in = open_text(path);
    GroupBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (getline_crlf(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.size() < 4)
            throw ParseError("expected at least 4 tab-separated columns, got " +
                                 std::to_string(fields.size()),
                             line_no);
        AS2Record rec;
        rec.qid = fields[0];
        rec.question = fields[1];
        rec.answer = fields[2];
        rec.label = parse_binary_label(fields[3], line_no);
        builder.add(std::move(rec));
    }
    return builder.take();
}

void write_as2_tsv(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const auto& group : dataset) {
        for (const auto& rec : group.records) {
            out << tsv_field(rec.qid) << '\t' << tsv_field(rec.question) << '\t' << tsv_field(rec.answer)
                << '\t' << rec.label << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

QuestionClass classify_question(const QuestionGroup& group) {
    if (group.records.empty()) throw Error("classify_question: empty group for qid " + group.qid);
    bool any_pos = false;
    bool any_neg = false;
    for (const auto& rec : group.records) {
        (rec.label ? any_pos : any_neg) = true;
    }
    if (any_pos && any_neg) return QuestionClass::clean;
    return any_pos ? QuestionClass::all_plus : QuestionClass::all_minus;
}

const char* to_string(QuestionClass c) {
    switch (c) {
        case QuestionClass::all_plus: return "all_plus";
        case QuestionClass::all_minus: return "all_minus";
        case QuestionClass::clean: return "clean";
    }
    return "?";
}

Dataset filter_split(const Dataset& dataset, FilterMode mode) {
    if (mode == FilterMode::origin) return dataset;
    Dataset out;
    for (const auto& group : dataset) {
        QuestionClass c = classify_question(group);
        bool keep = mode == FilterMode::without_all_minus ? c != QuestionClass::all_minus
                                                          : c == QuestionClass::clean;
        if (keep) out.push_back(group);
    }
    return out;
}

DatasetStats compute_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.num_q = dataset.size();
    for (const auto& group : dataset) {
        for (const auto& rec : group.records) {
            ++stats.num_a;
            if (rec.label) {
                ++stats.num_pos;
            } else {
                ++stats.num_neg;
            }
        }
    }
    return stats;
}

std::uint64_t emit_labeled_pairs(const std::vector<LabeledPair>& pairs,
                                 const std::filesystem::path& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const LabeledPair& p : pairs) {
        if (format == OutputFormat::tsv) {
            out << tsv_field(p.qid) << '\t' << tsv_field(p.question) << '\t' << tsv_field(p.answer) << '\t'
                << p.label << '\t' << format_double(p.eval_score) << '\t' << p.doc_id << '\t' << p.sent_idx
                << '\n';
        } else {
            nlohmann::json j;
            j["qid"] = p.qid;
            j["question"] = p.question;
            j["answer"] = p.answer;
            j["label"] = p.label;
            j["eval_score"] = p.eval_score;
            j["doc_id"] = p.doc_id;
            j["sent_idx"] = p.sent_idx;
            out << j.dump() << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
    return pairs.size();
}

std::vector<ReferencePair> load_reference_pairs(const std::filesystem::path& path) {
    std::vector<ReferencePair> pairs;
    auto in = open_text(path);
    std::string line;
    std::size_t line_no = 0;
    const bool jsonl = path.extension() == ".jsonl";
    while (getline_crlf(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ReferencePair pair;
        if (jsonl) {
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("qid") || !j.contains("question") ||
                !j.contains("reference"))
                throw ParseError("expected {\"qid\",\"question\",\"reference\"}", line_no);
            pair.qid = j["qid"].get<std::string>();
            pair.question = j["question"].get<std::string>();
            pair.reference = j["reference"].get<std::string>();
        } else {
            auto fields = split_tabs(line);
            if (fields.size() != 3)
                throw ParseError("expected 3 tab-separated columns (qid, question, reference), got " +
                                     std::to_string(fields.size()),
                                 line_no);
            pair.qid = fields[0];
            pair.question = fields[1];
            pair.reference = fields[2];
        }
        if (pair.question.empty() || pair.reference.empty())
            throw ParseError("question and reference must be non-empty", line_no);
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

std::vector<ReferenceGroup> group_reference_pairs(const std::vector<ReferencePair>& pairs) {
    std::vector<ReferenceGroup> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& pair : pairs) {
        auto it = index.find(pair.qid);
        if (it == index.end()) {
            index.emplace(pair.qid, groups.size());
            groups.push_back({pair.qid, pair.question, {pair.reference}});
        } else {
            groups[it->second].references.push_back(pair.reference);
        }
    }
    return groups;
}

Dataset convert_wikiqa_tsv(const std::filesystem::path& path) {
    auto in = open_text(path);
    GroupBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (getline_crlf(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (line_no == 1 && !fields.empty() && fields[0] == "QuestionID") continue;  // header
        if (fields.size() != 7)
            throw ParseError("expected 7 tab-separated columns in WikiQA file, got " +
                                 std::to_string(fields.size()),
                             line_no);
        AS2Record rec;
        rec.qid = fields[0];
        rec.question = fields[1];
        rec.answer = fields[5];
        rec.label = parse_binary_label(fields[6], line_no);
        builder.add(std::move(rec));
    }
    return builder.take();
}

Dataset convert_jsonl(const std::filesystem::path& path) {
    auto in = open_text(path);
    GroupBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    while (getline_crlf(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("qid") || !j.contains("question") ||
            !j.contains("answer") || !j.contains("label"))
            throw ParseError("expected {\"qid\",\"question\",\"answer\",\"label\"}", line_no);
        AS2Record rec;
        rec.qid = j["qid"].get<std::string>();
        rec.question = j["question"].get<std::string>();
        rec.answer = j["answer"].get<std::string>();
        if (j["label"].is_number_integer()) {
            auto v = j["label"].get<std::int64_t>();
            if (v != 0 && v != 1) throw ParseError("label must be 0 or 1", line_no);
            rec.label = static_cast<int>(v);
        } else {
            throw ParseError("label must be an integer 0 or 1", line_no);
        }
        builder.add(std::move(rec));
    }
    return builder.take();
}

}  // namespace rws
