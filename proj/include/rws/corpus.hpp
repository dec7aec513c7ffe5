#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rws {

struct Document {
    std::uint64_t doc_id = 0;  // dense, assigned in ingestion order from 0
    std::string source_id;     // URL or file provenance; may be empty
    std::string text;          // NFC-normalized UTF-8, control chars stripped
};

struct Sentence {
    std::uint64_t doc_id = 0;
    std::uint32_t sent_idx = 0;  // 0-based position within the document
    std::string text;
};

enum class CorpusFormat { jsonl, plain_dir };

struct IngestReport {
    std::uint64_t documents = 0;
    std::uint64_t skipped = 0;  // records that were empty after normalization
};

// Applied to every document at ingest: UTF-8 validation (invalid sequences
// become U+FFFD), removal of control characters other than '\n', and NFC.
std::string normalize_text(std::string_view raw);

// Immutable on-disk document collection: `docs.dat` (records) + `docs.idx`
// (offsets). See docs/FORMATS.md. Safe for unlimited concurrent readers.
class DocumentStore {
public:
    // Ingests `input` into `store_dir`, replacing any previous store there.
    // jsonl: one {"text": ..., "url"?: ...} object per line.
    // plain_dir: every regular file under `input` (sorted by relative path)
    // becomes one document.
    static IngestReport ingest(const std::filesystem::path& input, CorpusFormat format,
                               const std::filesystem::path& store_dir);

    static DocumentStore open(const std::filesystem::path& store_dir);

    std::uint64_t size() const { return docs_.size(); }
    const Document& get(std::uint64_t doc_id) const;
    const std::vector<Document>& documents() const { return docs_; }
    const std::filesystem::path& dir() const { return dir_; }

    // FNV-1a over both store files; recorded in run manifests.
    std::string digest() const;

private:
    std::filesystem::path dir_;
    std::vector<Document> docs_;
};

struct SegmenterOptions {
    std::size_t max_sentence_chars = 1000;  // in code points; longer runs hard-wrap
};

// Rule-based splitter: boundaries at '.', '!', '?' followed by whitespace and
// an uppercase letter (or end of text); "Dr."-style abbreviations and
// single-uppercase-letter initials do not split; a blank line always splits.
std::vector<Sentence> segment_sentences(const Document& doc, const SegmenterOptions& options = {});

// The abbreviation list guarding the splitter; mirrored in data/abbreviations.txt.
const std::vector<std::string>& default_abbreviations();

}  // namespace rws
