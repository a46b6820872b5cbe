#pragma once

#include <string>
#include <string_view>

namespace topictrend::ingest {

// Returns the visible text of an HTML/XML fragment.
//
// Rules:
//  * script, style, head-level noscript/template contents are dropped;
//  * block-level tags (p, div, br, li, h1..h6, td, ...) and dropped
//    elements act as word separators, inline tags (b, i, span, a, ...)
//    do not;
//  * comments, doctype and processing instructions are removed;
//  * character references (named subset, decimal, hex) are decoded;
//  * whitespace runs collapse to a single space and the result is trimmed.
//
// Stray or unbalanced tags are tolerated; an unterminated '<' is kept as text.
std::string strip_markup(std::string_view markup);

}  // namespace topictrend::ingest
