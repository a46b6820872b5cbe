#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace topictrend::analysis {

enum class MainArea {
  ValueTheory,
  MetaphysicsEpistemology,
  ScienceLogicMath,
  HistoryWesternPhil,
  PhilTraditions,
  Other,
};

inline constexpr std::array<MainArea, 6> kAllAreas = {
    MainArea::ValueTheory,        MainArea::MetaphysicsEpistemology, MainArea::ScienceLogicMath,
    MainArea::HistoryWesternPhil, MainArea::PhilTraditions,          MainArea::Other,
};

// Enum spelling, e.g. "ValueTheory".
std::string to_string(MainArea area);
// Human-readable name for report headers.
std::string display_name(MainArea area);
// Accepts the enum spelling (case-insensitive). Throws UnknownMainArea.
MainArea parse_main_area(std::string_view text);

struct TopicTags {
  std::size_t topic_id = 0;
  MainArea main_area = MainArea::Other;
  std::vector<std::string> subareas;
  bool historical = false;

  bool operator==(const TopicTags&) const = default;
};

struct TagSet {
  std::vector<TopicTags> tags;  // index == topic id
  std::vector<std::string> warnings;
};

// Every topic tagged Other, not historical.
std::vector<TopicTags> default_tags(std::size_t num_topics);

// Tab-separated file with header `topic_id  main_area  subareas  historical`;
// subareas are separated by ';', historical is true/false (also 1/0,
// yes/no, or empty for false). Blank lines and lines starting with '#' are
// ignored. Topics missing from the file default to Other with a warning.
//
// Throws ParseError (with line number), DuplicateTopicId (naming both
// lines), UnknownMainArea, FileNotFound.
TagSet load_tags(const std::filesystem::path& path, std::size_t num_topics);
TagSet parse_tags(std::string_view text, std::size_t num_topics);

}  // namespace topictrend::analysis
