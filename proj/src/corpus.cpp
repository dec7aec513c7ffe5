#include "rws/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rws/errors.hpp"
#include "rws/io_util.hpp"
#include "rws/unicode.hpp"

namespace rws {

namespace {

constexpr char kDocsMagic[4] = {'R', 'W', 'S', 'D'};
constexpr char kOffsetsMagic[4] = {'R', 'W', 'S', 'O'};
constexpr std::uint32_t kStoreVersion = 1;

bool is_control(char32_t cp) {
    return (cp < 0x20 && cp != U'\n') || (cp >= 0x7F && cp <= 0x9F);
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\n'; });
}

void check_magic(std::istream& is, const char (&magic)[4], const std::filesystem::path& path) {
    char buf[4];
    is.read(buf, 4);
    if (!is || !std::equal(buf, buf + 4, magic)) throw IoError("bad magic in " + path.string());
    std::uint32_t version = read_u32(is);
    if (version != kStoreVersion)
        throw IoError("unsupported store version " + std::to_string(version) + " in " + path.string());
}

struct RawRecord {
    std::string source_id;
    std::string text;
};

IngestReport write_store(const std::vector<RawRecord>& records, const std::filesystem::path& store_dir) {
    std::filesystem::create_directories(store_dir);
    std::ofstream dat(store_dir / "docs.dat", std::ios::binary | std::ios::trunc);
    std::ofstream idx(store_dir / "docs.idx", std::ios::binary | std::ios::trunc);
    if (!dat || !idx) throw IoError("cannot create store files in " + store_dir.string());

    dat.write(kDocsMagic, 4);
    write_u32(dat, kStoreVersion);
    idx.write(kOffsetsMagic, 4);
    write_u32(idx, kStoreVersion);

    IngestReport report;
    std::vector<std::uint64_t> offsets;
    std::uint64_t offset = 8;  // magic + version
    for (const auto& rec : records) {
        std::string text = normalize_text(rec.text);
        if (text.empty() || is_blank(text)) {
            ++report.skipped;
            continue;
        }
        offsets.push_back(offset);
        write_u32(dat, static_cast<std::uint32_t>(rec.source_id.size()));
        write_bytes(dat, rec.source_id);
        write_u32(dat, static_cast<std::uint32_t>(text.size()));
        write_bytes(dat, text);
        offset += 8 + rec.source_id.size() + text.size();
        ++report.documents;
    }
    write_u64(idx, offsets.size());
    for (std::uint64_t o : offsets) write_u64(idx, o);
    if (!dat || !idx) throw IoError("write failed in " + store_dir.string());
    return report;
}

std::vector<RawRecord> read_jsonl(const std::filesystem::path& input) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open corpus input: " + input.string());
    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string())
            throw ParseError("bad jsonl record in " + input.string() + ": expected object with string \"text\"",
                             line_no);
        RawRecord rec;
        rec.text = j["text"].get<std::string>();
        if (j.contains("url") && j["url"].is_string()) rec.source_id = j["url"].get<std::string>();
        records.push_back(std::move(rec));
    }
    if (in.bad()) throw IoError("read failed: " + input.string());
    return records;
}

std::vector<RawRecord> read_plain_dir(const std::filesystem::path& input) {
    if (!std::filesystem::is_directory(input)) throw IoError("not a directory: " + input.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(input)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    // Sorted relative paths make doc_id assignment independent of directory
    // iteration order.
    std::sort(files.begin(), files.end(), [&](const auto& a, const auto& b) {
        return a.lexically_relative(input).generic_string() < b.lexically_relative(input).generic_string();
    });
    std::vector<RawRecord> records;
    records.reserve(files.size());
    for (const auto& f : files) {
        RawRecord rec;
        rec.source_id = f.lexically_relative(input).generic_string();
        rec.text = read_file(f);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
    auto cps = unicode::decode_utf8(raw);
    std::vector<char32_t> kept;
    kept.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!is_control(cp)) kept.push_back(cp);
    }
    return unicode::encode_utf8(unicode::nfc(kept));
}

IngestReport DocumentStore::ingest(const std::filesystem::path& input, CorpusFormat format,
                                   const std::filesystem::path& store_dir) {
    std::vector<RawRecord> records =
        format == CorpusFormat::jsonl ? read_jsonl(input) : read_plain_dir(input);
    return write_store(records, store_dir);
}

DocumentStore DocumentStore::open(const std::filesystem::path& store_dir) {
    std::ifstream idx(store_dir / "docs.idx", std::ios::binary);
    if (!idx) throw IoError("cannot open store: " + (store_dir / "docs.idx").string());
    check_magic(idx, kOffsetsMagic, store_dir / "docs.idx");
    std::uint64_t count = read_u64(idx);
    std::vector<std::uint64_t> offsets(count);
    for (auto& o : offsets) o = read_u64(idx);

    std::ifstream dat(store_dir / "docs.dat", std::ios::binary);
    if (!dat) throw IoError("cannot open store: " + (store_dir / "docs.dat").string());
    check_magic(dat, kDocsMagic, store_dir / "docs.dat");

    DocumentStore store;
    store.dir_ = store_dir;
    store.docs_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        dat.seekg(static_cast<std::streamoff>(offsets[i]));
        Document doc;
        doc.doc_id = i;
        std::uint32_t source_len = read_u32(dat);
        doc.source_id = read_bytes(dat, source_len);
        std::uint32_t text_len = read_u32(dat);
        doc.text = read_bytes(dat, text_len);
        store.docs_.push_back(std::move(doc));
    }
    return store;
}

const Document& DocumentStore::get(std::uint64_t doc_id) const {
    if (doc_id >= docs_.size())
        throw Error("unknown doc_id " + std::to_string(doc_id) + " (store has " +
                    std::to_string(docs_.size()) + " documents)");
    return docs_[doc_id];
}

std::string DocumentStore::digest() const {
    std::string bytes = read_file(dir_ / "docs.dat");
    bytes += read_file(dir_ / "docs.idx");
    return to_hex(fnv1a64(bytes));
}

const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> kAbbrevs = {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "ft",
        "etc", "vs", "e.g", "i.e", "cf", "al", "inc", "ltd", "co", "corp",
        "dept", "univ", "fig", "vol", "pp", "ed", "est", "gen", "col",
        "lt", "sgt", "capt", "gov", "sen", "rep", "hon", "rev", "approx",
        "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept",
        "oct", "nov", "dec",
    };
    return kAbbrevs;
}

namespace {

bool is_space_cp(char32_t cp) { return cp == U' ' || cp == U'\n'; }
bool is_upper_ascii(char32_t cp) { return cp >= U'A' && cp <= U'Z'; }
bool is_word_cp(char32_t cp) {
    return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
           cp == U'.' || cp > 0x7F;
}

// The word (letters/digits/inner periods) immediately before position `pos`,
// ASCII-lowercased. "e.g." keeps its inner period so it can match the list.
std::string word_before(const std::vector<char32_t>& cps, std::size_t pos) {
    std::size_t end = pos;
    std::size_t begin = end;
    while (begin > 0 && is_word_cp(cps[begin - 1])) --begin;
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        char32_t cp = cps[i];
        if (is_upper_ascii(cp)) cp = cp - U'A' + U'a';
        unicode::append_utf8(out, cp);
    }
    return out;
}

bool abbreviation_guard(const std::vector<char32_t>& cps, std::size_t dot_pos) {
    std::string word = word_before(cps, dot_pos);
    if (word.empty()) return false;
    // Single-letter initials: "J. Smith".
    if (word.size() == 1 && is_upper_ascii(cps[dot_pos - 1])) return true;
    const auto& list = default_abbreviations();
    return std::find(list.begin(), list.end(), word) != list.end();
}

struct Span {
    std::size_t begin;
    std::size_t end;
};

void trim_span(const std::vector<char32_t>& cps, Span& s) {
    while (s.begin < s.end && is_space_cp(cps[s.begin])) ++s.begin;
    while (s.end > s.begin && is_space_cp(cps[s.end - 1])) --s.end;
}

}  // namespace

std::vector<Sentence> segment_sentences(const Document& doc, const SegmenterOptions& options) {
    const std::vector<char32_t> cps = unicode::decode_utf8(doc.text);
    const std::size_t n = cps.size();
    std::vector<Span> spans;

    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        char32_t cp = cps[i];
        if (cp == U'\n') {
            // Blank line: newline, optional spaces, newline.
            std::size_t j = i + 1;
            while (j < n && cps[j] == U' ') ++j;
            if (j < n && cps[j] == U'\n') {
                spans.push_back({start, i});
                while (j < n && (cps[j] == U'\n' || cps[j] == U' ')) ++j;
                start = j;
                i = j - 1;
            }
            continue;
        }
        if (cp != U'.' && cp != U'!' && cp != U'?') continue;
        std::size_t j = i + 1;
        while (j < n && is_space_cp(cps[j])) ++j;
        bool at_end = j >= n;
        bool upper_next = !at_end && is_upper_ascii(cps[j]) && j > i + 1;
        if (!at_end && !upper_next) continue;
        if (cp == U'.' && !at_end && abbreviation_guard(cps, i)) continue;
        spans.push_back({start, i + 1});
        start = j;
        i = j - 1;
    }
    if (start < n) spans.push_back({start, n});

    std::vector<Sentence> sentences;
    std::uint32_t sent_idx = 0;
    const std::size_t max_len = options.max_sentence_chars;
    for (Span span : spans) {
        trim_span(cps, span);
        while (span.begin < span.end) {
            Span piece = span;
            if (piece.end - piece.begin > max_len) {
                // Hard wrap at the last whitespace inside the limit.
                std::size_t cut = piece.begin + max_len;
                std::size_t ws = cut;
                while (ws > piece.begin && !is_space_cp(cps[ws - 1])) --ws;
                piece.end = ws > piece.begin ? ws : cut;
            }
            Span trimmed = piece;
            trim_span(cps, trimmed);
            if (trimmed.begin < trimmed.end) {
                std::string text;
                for (std::size_t i = trimmed.begin; i < trimmed.end; ++i)
                    unicode::append_utf8(text, cps[i]);
                sentences.push_back({doc.doc_id, sent_idx++, std::move(text)});
            }
            span.begin = piece.end;
            while (span.begin < span.end && is_space_cp(cps[span.begin])) ++span.begin;
        }
    }
    return sentences;
}

}  // namespace rws
