#pragma once

#include <string>
#include <string_view>

namespace topictrend::utf8 {

// Decodes the code point starting at `pos` and advances `pos` past it.
// Invalid sequences decode as U+FFFD and consume a single byte.
char32_t decode_next(std::string_view text, std::size_t& pos);

void append(std::string& out, char32_t cp);

std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

// Letter test covering ASCII, Latin-1, Latin Extended-A/B, Greek and
// Cyrillic, plus combining diacritics so decomposed accents stay attached.
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view text);

// Length in code points.
std::size_t length(std::string_view text);

}  // namespace topictrend::utf8
