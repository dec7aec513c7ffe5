#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rws::unicode {

// Decodes UTF-8 with validation; every maximal invalid byte sequence yields
// one U+FFFD. Total function, never throws.
std::vector<char32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<char32_t>& cps);
void append_utf8(std::string& out, char32_t cp);

std::uint8_t combining_class(char32_t cp);

// Canonical composition (NFC) over a code point sequence.
std::vector<char32_t> nfc(const std::vector<char32_t>& input);

// Validate + NFC in one step on UTF-8 bytes.
std::string nfc_utf8(std::string_view s);

}  // namespace rws::unicode
