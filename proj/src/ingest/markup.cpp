#include "topictrend/ingest/markup.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "topictrend/ingest/utf8.hpp"

namespace topictrend::ingest {

namespace {

const std::unordered_set<std::string>& block_tags() {
  static const std::unordered_set<std::string> tags = {
      "address", "article", "aside", "blockquote", "body", "br", "caption",
      "dd", "div", "dl", "dt", "fieldset", "figcaption", "figure", "footer",
      "form", "h1", "h2", "h3", "h4", "h5", "h6", "head", "header", "hr",
      "html", "li", "main", "nav", "ol", "option", "p", "pre", "section",
      "table", "tbody", "td", "tfoot", "th", "thead", "title", "tr", "ul"};
  return tags;
}

bool is_dropped_element(const std::string& name) {
  return name == "script" || name == "style" || name == "noscript" || name == "template";
}

const std::unordered_map<std::string, char32_t>& named_entities() {
  static const std::unordered_map<std::string, char32_t> entities = {
      {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
      {"apos", U'\''},    {"nbsp", 0xA0},     {"iexcl", 0xA1},    {"iquest", 0xBF},
      {"laquo", 0xAB},    {"raquo", 0xBB},    {"ordf", 0xAA},     {"ordm", 0xBA},
      {"sect", 0xA7},     {"para", 0xB6},     {"middot", 0xB7},   {"deg", 0xB0},
      {"aacute", 0xE1},   {"eacute", 0xE9},   {"iacute", 0xED},   {"oacute", 0xF3},
      {"uacute", 0xFA},   {"Aacute", 0xC1},   {"Eacute", 0xC9},   {"Iacute", 0xCD},
      {"Oacute", 0xD3},   {"Uacute", 0xDA},   {"ntilde", 0xF1},   {"Ntilde", 0xD1},
      {"uuml", 0xFC},     {"Uuml", 0xDC},     {"agrave", 0xE0},   {"egrave", 0xE8},
      {"ccedil", 0xE7},   {"Ccedil", 0xC7},   {"atilde", 0xE3},   {"otilde", 0xF5},
      {"acirc", 0xE2},    {"ecirc", 0xEA},    {"ocirc", 0xF4},    {"ouml", 0xF6},
      {"auml", 0xE4},     {"szlig", 0xDF},    {"ndash", 0x2013},  {"mdash", 0x2014},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
      {"hellip", 0x2026}, {"shy", 0xAD}};
  return entities;
}

char ascii_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(text[pos + i]) != prefix[i]) return false;
  }
  return true;
}

// Finds the '>' closing a tag that starts at `pos`, skipping quoted
// attribute values. Returns npos when the tag is unterminated.
std::size_t find_tag_end(std::string_view text, std::size_t pos) {
  char quote = 0;
  for (std::size_t i = pos; i < text.size(); ++i) {
    const char c = text[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

// Decodes a character reference starting at text[pos] == '&'. On success
// appends the decoded text and returns the index past the reference.
std::size_t decode_reference(std::string_view text, std::size_t pos, std::string& out) {
  const std::size_t semi = text.find(';', pos + 1);
  if (semi == std::string_view::npos || semi - pos > 12) {
    out.push_back('&');
    return pos + 1;
  }
  const std::string_view body = text.substr(pos + 1, semi - pos - 1);
  if (!body.empty() && body[0] == '#') {
    unsigned long value = 0;
    std::from_chars_result res{};
    if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
      res = std::from_chars(body.data() + 2, body.data() + body.size(), value, 16);
    } else {
      res = std::from_chars(body.data() + 1, body.data() + body.size(), value, 10);
    }
    if (res.ec == std::errc() && res.ptr == body.data() + body.size() && value > 0 &&
        value <= 0x10FFFF) {
      utf8::append(out, static_cast<char32_t>(value));
      return semi + 1;
    }
  } else {
    const auto it = named_entities().find(std::string(body));
    if (it != named_entities().end()) {
      utf8::append(out, it->second);
      return semi + 1;
    }
  }
  out.push_back('&');
  return pos + 1;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = utf8::decode_next(text, pos);
    const bool space = cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
                       cp == '\v' || cp == 0xA0;
    if (space) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(text.substr(start, pos - start));
  }
  return out;
}

}  // namespace

std::string strip_markup(std::string_view markup) {
  std::string visible;
  visible.reserve(markup.size());
  std::size_t i = 0;
  while (i < markup.size()) {
    const char c = markup[i];
    if (c == '&') {
      i = decode_reference(markup, i, visible);
      continue;
    }
    if (c != '<') {
      visible.push_back(c);
      ++i;
      continue;
    }
    if (markup.compare(i, 4, "<!--") == 0) {
      const std::size_t end = markup.find("-->", i + 4);
      i = end == std::string_view::npos ? markup.size() : end + 3;
      continue;
    }
    if (i + 1 < markup.size() && (markup[i + 1] == '!' || markup[i + 1] == '?')) {
      const std::size_t end = markup.find('>', i);
      i = end == std::string_view::npos ? markup.size() : end + 1;
      continue;
    }
    std::size_t name_start = i + 1;
    const bool closing = name_start < markup.size() && markup[name_start] == '/';
    if (closing) ++name_start;
    if (name_start >= markup.size() || !std::isalpha(static_cast<unsigned char>(markup[name_start]))) {
      visible.push_back(c);
      ++i;
      continue;
    }
    const std::size_t end = find_tag_end(markup, name_start);
    if (end == std::string_view::npos) {
      visible.push_back(c);
      ++i;
      continue;
    }
    std::size_t name_end = name_start;
    while (name_end < end && std::isalnum(static_cast<unsigned char>(markup[name_end]))) ++name_end;
    std::string name(markup.substr(name_start, name_end - name_start));
    std::transform(name.begin(), name.end(), name.begin(), ascii_lower);
    const bool self_closing = end > name_start && markup[end - 1] == '/';
    i = end + 1;

    if (is_dropped_element(name)) {
      visible.push_back(' ');
      if (!closing && !self_closing) {
        const std::string close = "</" + name;
        std::size_t j = i;
        while (j < markup.size() && !starts_with_ci(markup, j, close)) ++j;
        if (j >= markup.size()) {
          i = markup.size();
        } else {
          const std::size_t close_end = markup.find('>', j);
          i = close_end == std::string_view::npos ? markup.size() : close_end + 1;
        }
      }
      continue;
    }
    if (block_tags().count(name)) visible.push_back(' ');
  }
  return collapse_whitespace(visible);
}

}  // namespace topictrend::ingest
