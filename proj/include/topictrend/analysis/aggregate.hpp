#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "topictrend/analysis/assignment.hpp"
#include "topictrend/analysis/tags.hpp"
#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::analysis {

struct DocInfo {
  std::string id;
  int year = 0;
};

std::vector<DocInfo> doc_table(const model::FittedModel& model);

struct WordScore {
  std::string word;
  double probability = 0.0;
};

// Words ranked by softmax(beta_{k,t}) averaged uniformly over every slice
// and every topic tagged `area` (ties by word). Throws NoTopicsInArea.
std::vector<WordScore> area_word_profile(const model::FittedModel& model, const std::vector<TopicTags>& tags,
                                         MainArea area, std::size_t top_n = 10);

inline constexpr std::size_t kNumAreas = kAllAreas.size();

struct AreaYearCounts {
  std::vector<int> years;                  // every year present in the doc table, ascending
  std::vector<std::size_t> docs_per_year;  // denominator for ratios
  std::array<std::vector<std::size_t>, kNumAreas> counts;  // [area][year index]
  std::array<std::vector<double>, kNumAreas> ratios;
  std::array<std::size_t, kNumAreas> totals{};             // distinct documents per area
};

// A document counts once per area however many of its topics carry that
// area, and may count in several areas. Throws UnknownDocId.
AreaYearCounts area_counts_by_year(const std::vector<TopicAssignment>& assignments,
                                   const std::vector<TopicTags>& tags, const std::vector<DocInfo>& docs);

struct YearRatio {
  int year = 0;
  std::size_t historical = 0;
  std::size_t total = 0;
  double ratio = 0.0;
};

struct HistoricalSeries {
  std::vector<YearRatio> points;  // years >= from_year with at least one document
  std::size_t historical = 0;
  std::size_t total = 0;
  double overall_ratio = 0.0;     // over the same window
};

// Documents assigned to at least one historical topic, per year. Throws
// UnknownDocId.
HistoricalSeries historical_ratio_series(const std::vector<TopicAssignment>& assignments,
                                         const std::vector<TopicTags>& tags, const std::vector<DocInfo>& docs,
                                         int from_year);

struct SubareaRow {
  MainArea area = MainArea::Other;
  std::string subarea;
  std::size_t topics = 0;
  std::size_t documents = 0;  // distinct documents assigned to the subarea's topics
};

// One row per (area, subarea), areas in enum order, then documents
// descending, then subarea name.
std::vector<SubareaRow> subarea_table(const std::vector<TopicAssignment>& assignments,
                                      const std::vector<TopicTags>& tags);

struct SubareaSeries {
  MainArea area = MainArea::Other;
  std::string subarea;
  std::vector<int> years;
  std::vector<std::size_t> counts;
};

// For each area with at least one subarea, the per-year document counts of
// its largest subarea (first row of subarea_table for that area).
std::vector<SubareaSeries> largest_subarea_series(const std::vector<TopicAssignment>& assignments,
                                                  const std::vector<TopicTags>& tags,
                                                  const std::vector<DocInfo>& docs);

struct HistoricalTopicRow {
  MainArea area = MainArea::Other;
  std::size_t topic_id = 0;
  std::vector<std::string> subareas;
  std::size_t documents = 0;
  std::vector<std::string> top_words;
};

// Historical topics grouped by area, at most `per_area` per area, by
// assigned documents descending then topic id.
std::vector<HistoricalTopicRow> historical_topic_table(const model::FittedModel& model,
                                                      const std::vector<TopicAssignment>& assignments,
                                                      const std::vector<TopicTags>& tags, std::size_t per_area = 5,
                                                      std::size_t top_words = 5);

struct PeriodStats {
  std::string label;
  int start_year = 0;
  int end_year = 0;
  std::size_t documents = 0;
  double average_length = 0.0;  // tokens kept in the corpus vocabulary
};

std::vector<PeriodStats> period_stats(const ingest::TimeSlicedCorpus& corpus);

}  // namespace topictrend::analysis
