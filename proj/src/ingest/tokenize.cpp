#include "topictrend/ingest/tokenize.hpp"

#include <algorithm>

#include "topictrend/ingest/utf8.hpp"

namespace topictrend::ingest {

TokenList normalize_and_tokenize(std::string_view text, std::size_t min_len) {
  TokenList tokens;
  std::string current;
  std::size_t current_len = 0;
  bool has_letter = false;

  auto flush = [&] {
    if (!current.empty() && has_letter && current_len >= min_len) {
      tokens.push_back(std::move(current));
    }
    current.clear();
    current_len = 0;
    has_letter = false;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode_next(text, pos);
    const bool letter = utf8::is_letter(cp);
    if (letter || utf8::is_digit(cp)) {
      utf8::append(current, utf8::to_lower(cp));
      ++current_len;
      has_letter = has_letter || letter;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenList filter_short(TokenList tokens, std::size_t min_len) {
  std::erase_if(tokens, [min_len](const std::string& t) { return utf8::length(t) < min_len; });
  return tokens;
}

}  // namespace topictrend::ingest
