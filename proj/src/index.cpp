#include "rws/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "rws/errors.hpp"
#include "rws/io_util.hpp"
#include "rws/tokenize.hpp"

namespace rws {

namespace {

constexpr char kIndexMagic[4] = {'R', 'W', 'S', 'X'};
constexpr std::uint32_t kIndexVersion = 1;

double mean(const std::vector<std::uint32_t>& v) {
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (std::uint32_t x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

}  // namespace

InvertedIndex InvertedIndex::build(const DocumentStore& store) {
    if (store.size() == 0) throw Error("cannot build an index over an empty store");

    // std::map keeps terms sorted, which makes the persisted layout (and the
    // rebuild) deterministic regardless of insertion order.
    std::map<std::string, std::vector<Posting>> postings;
    InvertedIndex index;
    index.stats_.doc_count = store.size();
    index.stats_.doc_lens.reserve(store.size());

    for (const Document& doc : store.documents()) {
        std::vector<std::string> tokens = tokenize(doc.text);
        index.stats_.doc_lens.push_back(static_cast<std::uint32_t>(tokens.size()));
        std::unordered_map<std::string, std::uint32_t> tf;
        for (auto& tok : tokens) ++tf[std::move(tok)];
        for (const auto& [term, count] : tf) {
            postings[term].push_back({doc.doc_id, count});
        }
    }
    index.stats_.avg_doc_len = mean(index.stats_.doc_lens);

    index.terms_.reserve(postings.size());
    index.postings_.reserve(postings.size());
    for (auto& [term, plist] : postings) {
        std::sort(plist.begin(), plist.end(),
                  [](const Posting& a, const Posting& b) { return a.doc_id < b.doc_id; });
        index.terms_.push_back(term);
        index.postings_.push_back(std::move(plist));
    }
    return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create index file: " + path.string());
    out.write(kIndexMagic, 4);
    write_u32(out, kIndexVersion);
    write_u64(out, stats_.doc_count);
    for (std::uint32_t len : stats_.doc_lens) write_u32(out, len);
    write_u64(out, terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        write_u32(out, static_cast<std::uint32_t>(terms_[i].size()));
        write_bytes(out, terms_[i]);
        write_u64(out, postings_[i].size());
        for (const Posting& p : postings_[i]) {
            write_u64(out, p.doc_id);
            write_u32(out, p.tf);
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || !std::equal(magic, magic + 4, kIndexMagic)) throw IoError("bad magic in " + path.string());
    std::uint32_t version = read_u32(in);
    if (version != kIndexVersion)
        throw IoError("unsupported index version " + std::to_string(version) + " in " + path.string());

    InvertedIndex index;
    index.stats_.doc_count = read_u64(in);
    index.stats_.doc_lens.resize(index.stats_.doc_count);
    for (auto& len : index.stats_.doc_lens) len = read_u32(in);
    index.stats_.avg_doc_len = mean(index.stats_.doc_lens);

    std::uint64_t term_count = read_u64(in);
    index.terms_.reserve(term_count);
    index.postings_.reserve(term_count);
    for (std::uint64_t i = 0; i < term_count; ++i) {
        std::uint32_t term_len = read_u32(in);
        index.terms_.push_back(read_bytes(in, term_len));
        std::uint64_t plen = read_u64(in);
        std::vector<Posting> plist(plen);
        for (auto& p : plist) {
            p.doc_id = read_u64(in);
            p.tf = read_u32(in);
        }
        index.postings_.push_back(std::move(plist));
    }
    return index;
}

std::size_t InvertedIndex::find_term(std::string_view term) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(it - terms_.begin());
}

std::uint32_t InvertedIndex::doc_frequency(std::string_view term) const {
    std::size_t i = find_term(term);
    if (i == static_cast<std::size_t>(-1)) return 0;
    return static_cast<std::uint32_t>(postings_[i].size());
}

double InvertedIndex::idf(std::string_view term) const {
    double n = static_cast<double>(stats_.doc_count);
    double df = static_cast<double>(doc_frequency(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
    std::size_t i = find_term(term);
    if (i == static_cast<std::size_t>(-1)) return {};
    return postings_[i];
}

double InvertedIndex::bm25_score(std::span<const std::string> query_terms, std::uint64_t doc_id,
                                 const Bm25Params& params) const {
    if (doc_id >= stats_.doc_count)
        throw Error("bm25_score: unknown doc_id " + std::to_string(doc_id));
    double len = static_cast<double>(stats_.doc_lens[doc_id]);
    double norm = params.k1 * (1.0 - params.b + params.b * len / stats_.avg_doc_len);
    double score = 0.0;
    for (const std::string& term : query_terms) {
        auto plist = postings(term);
        auto it = std::lower_bound(plist.begin(), plist.end(), doc_id,
                                   [](const Posting& p, std::uint64_t d) { return p.doc_id < d; });
        if (it == plist.end() || it->doc_id != doc_id) continue;
        double tf = static_cast<double>(it->tf);
        score += idf(term) * tf * (params.k1 + 1.0) / (tf + norm);
    }
    return score;
}

std::vector<ScoredDoc> InvertedIndex::retrieve_topk(std::string_view question, std::size_t k1,
                                                    const Bm25Params& params) const {
    std::vector<std::string> query_terms = tokenize(question);
    if (query_terms.empty()) return {};

    // Term-at-a-time accumulation in query order; positions match the
    // per-document closed form exactly, addend for addend.
    std::vector<double> scores(stats_.doc_count, 0.0);
    std::vector<bool> touched(stats_.doc_count, false);
    for (const std::string& term : query_terms) {
        double term_idf = idf(term);
        for (const Posting& p : postings(term)) {
            double len = static_cast<double>(stats_.doc_lens[p.doc_id]);
            double norm = params.k1 * (1.0 - params.b + params.b * len / stats_.avg_doc_len);
            double tf = static_cast<double>(p.tf);
            scores[p.doc_id] += term_idf * tf * (params.k1 + 1.0) / (tf + norm);
            touched[p.doc_id] = true;
        }
    }

    std::vector<ScoredDoc> hits;
    for (std::uint64_t d = 0; d < stats_.doc_count; ++d) {
        if (touched[d] && scores[d] > 0.0) hits.push_back({d, scores[d]});
    }
    std::sort(hits.begin(), hits.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (hits.size() > k1) hits.resize(k1);
    return hits;
}

}  // namespace rws
