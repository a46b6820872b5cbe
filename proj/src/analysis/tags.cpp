#include "topictrend/analysis/tags.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "topictrend/error.hpp"

namespace topictrend::analysis {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Error parse_error(std::size_t line, const std::string& message) {
  return data_error("ParseError", "line " + std::to_string(line) + ": " + message);
}

}  // namespace

std::string to_string(MainArea area) {
  switch (area) {
    case MainArea::ValueTheory: return "ValueTheory";
    case MainArea::MetaphysicsEpistemology: return "MetaphysicsEpistemology";
    case MainArea::ScienceLogicMath: return "ScienceLogicMath";
    case MainArea::HistoryWesternPhil: return "HistoryWesternPhil";
    case MainArea::PhilTraditions: return "PhilTraditions";
    case MainArea::Other: return "Other";
  }
  return "Other";
}

std::string display_name(MainArea area) {
  switch (area) {
    case MainArea::ValueTheory: return "Value theory";
    case MainArea::MetaphysicsEpistemology: return "Metaphysics & Epistemology";
    case MainArea::ScienceLogicMath: return "Science, Logic & Mathematics";
    case MainArea::HistoryWesternPhil: return "History of Western Philosophy";
    case MainArea::PhilTraditions: return "Philosophical traditions";
    case MainArea::Other: return "Other";
  }
  return "Other";
}

MainArea parse_main_area(std::string_view text) {
  const std::string key = lower(trim(text));
  for (MainArea a : kAllAreas) {
    if (lower(to_string(a)) == key) return a;
  }
  throw data_error("UnknownMainArea", "unknown main area '" + std::string(trim(text)) + "'");
}

std::vector<TopicTags> default_tags(std::size_t num_topics) {
  std::vector<TopicTags> tags(num_topics);
  for (std::size_t k = 0; k < num_topics; ++k) tags[k].topic_id = k;
  return tags;
}

TagSet parse_tags(std::string_view text, std::size_t num_topics) {
  TagSet out;
  out.tags = default_tags(num_topics);
  std::vector<std::size_t> seen_line(num_topics, 0);
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string_view rest = text; !rest.empty() || line_no == 0;) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') {
      if (rest.empty()) break;
      continue;
    }
    auto fields = split(line, '\t');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 4 || lower(trim(fields[0])) != "topic_id" || lower(trim(fields[1])) != "main_area" ||
          lower(trim(fields[2])) != "subareas" || lower(trim(fields[3])) != "historical") {
        throw parse_error(line_no, "expected header 'topic_id<TAB>main_area<TAB>subareas<TAB>historical'");
      }
      if (rest.empty()) break;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 4) {
      throw parse_error(line_no, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    }
    const auto id_text = trim(fields[0]);
    std::size_t id = 0;
    const auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || ptr != id_text.data() + id_text.size()) {
      throw parse_error(line_no, "topic_id '" + std::string(id_text) + "' is not a non-negative integer");
    }
    if (id >= num_topics) {
      throw parse_error(line_no, "topic_id " + std::to_string(id) + " is not below K=" + std::to_string(num_topics));
    }
    if (seen_line[id] != 0) {
      throw data_error("DuplicateTopicId", "topic " + std::to_string(id) + " tagged on line " +
                                               std::to_string(seen_line[id]) + " and line " + std::to_string(line_no));
    }
    seen_line[id] = line_no;
    TopicTags& tag = out.tags[id];
    try {
      tag.main_area = parse_main_area(fields[1]);
    } catch (const Error&) {
      throw data_error("UnknownMainArea",
                       "line " + std::to_string(line_no) + ": unknown main area '" + std::string(trim(fields[1])) + "'");
    }
    if (fields.size() > 2) {
      for (auto part : split(fields[2], ';')) {
        if (!trim(part).empty()) tag.subareas.emplace_back(trim(part));
      }
    }
    if (fields.size() > 3) {
      const std::string flag = lower(trim(fields[3]));
      if (flag == "true" || flag == "1" || flag == "yes") {
        tag.historical = true;
      } else if (flag.empty() || flag == "false" || flag == "0" || flag == "no") {
        tag.historical = false;
      } else {
        throw parse_error(line_no, "historical must be true or false, got '" + flag + "'");
      }
    }
    if (rest.empty()) break;
  }
  for (std::size_t k = 0; k < num_topics; ++k) {
    if (seen_line[k] == 0) out.warnings.push_back("topic " + std::to_string(k) + " is not tagged; using Other");
  }
  return out;
}

TagSet load_tags(const std::filesystem::path& path, std::size_t num_topics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("FileNotFound", "cannot open tags file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tags(buf.str(), num_topics);
}

}  // namespace topictrend::analysis
