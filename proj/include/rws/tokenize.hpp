#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rws {

// The single tokenizer shared by the index, the lexical reranker, and the
// proxy evaluator. Lowercases ASCII and splits on non-alphanumeric bytes;
// bytes >= 0x80 (UTF-8 continuations and lead bytes) are kept inside tokens,
// so non-Latin words survive as single terms. Pure function.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace rws
