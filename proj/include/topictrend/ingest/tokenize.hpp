#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace topictrend::ingest {

using TokenList = std::vector<std::string>;

// Splits plain text into lowercase tokens.
//
// A token is a maximal run of letters and digits. Everything else
// (punctuation, symbols, whitespace) separates tokens. Tokens made only of
// digits are dropped, as are tokens shorter than `min_len` code points.
// Diacritics are kept as-is.
TokenList normalize_and_tokenize(std::string_view text, std::size_t min_len = 3);

// Drops tokens shorter than `min_len` code points, preserving order.
TokenList filter_short(TokenList tokens, std::size_t min_len);

}  // namespace topictrend::ingest
