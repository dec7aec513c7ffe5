#include "rws/unicode.hpp"

#include <algorithm>
#include <cstdint>

#include "unicode_tables.inc"

namespace rws::unicode {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

const unicode_tables::DecompEntry* find_decomp(char32_t cp) {
    auto* begin = std::begin(unicode_tables::kDecomp);
    auto* end = std::end(unicode_tables::kDecomp);
    auto* it = std::lower_bound(begin, end, cp,
                                [](const unicode_tables::DecompEntry& e, char32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

char32_t compose_pair(char32_t a, char32_t b) {
    // Hangul LV and LVT composition.
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) * kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount && (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    auto* begin = std::begin(unicode_tables::kComp);
    auto* end = std::end(unicode_tables::kComp);
    auto* it = std::lower_bound(begin, end, key,
                                [](const unicode_tables::CompEntry& e, std::uint64_t k) { return e.key < k; });
    return (it != end && it->key == key) ? it->composed : 0;
}

void decompose_cp(char32_t cp, std::vector<char32_t>& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        char32_t s = cp - kHangulSBase;
        out.push_back(kHangulLBase + s / kHangulNCount);
        out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
        char32_t t = s % kHangulTCount;
        if (t != 0) out.push_back(kHangulTBase + t);
        return;
    }
    if (const auto* e = find_decomp(cp)) {
        for (int i = 0; i < e->len; ++i) out.push_back(unicode_tables::kDecompPool[e->offset + i]);
        return;
    }
    out.push_back(cp);
}

}  // namespace

std::uint8_t combining_class(char32_t cp) {
    auto* begin = std::begin(unicode_tables::kCcc);
    auto* end = std::end(unicode_tables::kCcc);
    auto* it = std::lower_bound(begin, end, cp,
                                [](const unicode_tables::CccEntry& e, char32_t c) { return e.cp < c; });
    return (it != end && it->cp == cp) ? it->ccc : 0;
}

std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        char32_t min_cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2; cp = b0 & 0x1F; min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3; cp = b0 & 0x0F; min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4; cp = b0 & 0x07; min_cp = 0x10000;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        int got = 1;
        for (; got < len && i + static_cast<std::size_t>(got) < s.size(); ++got) {
            unsigned char b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(got)]);
            if ((b & 0xC0) != 0x80) break;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (got != len || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            i += static_cast<std::size_t>(got);  // skip the maximal invalid subsequence
        } else {
            out.push_back(cp);
            i += static_cast<std::size_t>(len);
        }
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

std::vector<char32_t> nfc(const std::vector<char32_t>& input) {
    // 1. Canonical decomposition (tables hold full expansions).
    std::vector<char32_t> buf;
    buf.reserve(input.size());
    for (char32_t cp : input) decompose_cp(cp, buf);

    // 2. Canonical ordering: stable sort of nonzero-ccc runs.
    std::size_t i = 0;
    while (i < buf.size()) {
        if (combining_class(buf[i]) == 0) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < buf.size() && combining_class(buf[j]) != 0) ++j;
        std::stable_sort(buf.begin() + static_cast<std::ptrdiff_t>(i),
                         buf.begin() + static_cast<std::ptrdiff_t>(j),
                         [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }

    // 3. Canonical composition.
    std::vector<char32_t> out;
    out.reserve(buf.size());
    std::ptrdiff_t last_starter = -1;
    int last_cc = 0;
    for (char32_t cp : buf) {
        int cc = combining_class(cp);
        if (last_starter >= 0 && (last_cc < cc || (last_cc == 0 && cc == 0))) {
            if (char32_t composed = compose_pair(out[static_cast<std::size_t>(last_starter)], cp)) {
                out[static_cast<std::size_t>(last_starter)] = composed;
                // last_cc unchanged: the removed char no longer blocks.
                continue;
            }
        }
        if (cc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size());
            last_cc = 0;
        } else {
            last_cc = cc;
        }
        out.push_back(cp);
    }
    return out;
}

std::string nfc_utf8(std::string_view s) {
    return encode_utf8(nfc(decode_utf8(s)));
}

}  // namespace rws::unicode
