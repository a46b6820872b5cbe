#include "topictrend/analysis/aggregate.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "topictrend/error.hpp"
#include "topictrend/model/metrics.hpp"

namespace topictrend::analysis {

namespace {

std::size_t area_index(MainArea a) { return static_cast<std::size_t>(a); }

const TopicTags& tag_of(const std::vector<TopicTags>& tags, std::size_t topic) {
  if (topic >= tags.size()) throw usage_error("InvalidArgument", "no tags for topic " + std::to_string(topic));
  return tags[topic];
}

std::unordered_map<std::string, int> year_index(const std::vector<DocInfo>& docs) {
  std::unordered_map<std::string, int> out;
  for (const auto& d : docs) out.emplace(d.id, d.year);
  return out;
}

int year_of(const std::unordered_map<std::string, int>& years, const std::string& id) {
  auto it = years.find(id);
  if (it == years.end()) throw data_error("UnknownDocId", "document '" + id + "' has no year");
  return it->second;
}

}  // namespace

std::vector<DocInfo> doc_table(const model::FittedModel& model) {
  std::vector<DocInfo> out;
  out.reserve(model.documents.size());
  for (const auto& d : model.documents) out.push_back({d.id, d.year});
  return out;
}

std::vector<WordScore> area_word_profile(const model::FittedModel& model, const std::vector<TopicTags>& tags,
                                         MainArea area, std::size_t top_n) {
  const std::size_t V = model.vocab_size();
  const std::size_t T = model.num_slices();
  std::vector<double> sum(V, 0.0);
  std::size_t terms = 0;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    if (tag_of(tags, k).main_area != area) continue;
    for (std::size_t t = 0; t < T; ++t) {
      const auto p = model.topic_distribution(k, t);
      for (std::size_t v = 0; v < V; ++v) sum[v] += p[v];
      ++terms;
    }
  }
  if (terms == 0) throw data_error("NoTopicsInArea", "no topic is tagged " + to_string(area));
  for (double& x : sum) x /= static_cast<double>(terms);
  std::vector<WordScore> out;
  for (std::size_t v : model::top_words(sum, top_n)) out.push_back({model.vocabulary[v], sum[v]});
  return out;
}

AreaYearCounts area_counts_by_year(const std::vector<TopicAssignment>& assignments,
                                   const std::vector<TopicTags>& tags, const std::vector<DocInfo>& docs) {
  const auto years = year_index(docs);
  AreaYearCounts out;
  std::map<int, std::size_t> per_year;
  for (const auto& d : docs) ++per_year[d.year];
  std::map<int, std::size_t> slot;
  for (const auto& [y, n] : per_year) {
    slot[y] = out.years.size();
    out.years.push_back(y);
    out.docs_per_year.push_back(n);
  }
  std::array<std::set<std::string>, kNumAreas> members;
  for (const auto& a : assignments) {
    const std::size_t area = area_index(tag_of(tags, a.topic_id).main_area);
    for (const auto& [id, p] : a.docs) {
      year_of(years, id);
      members[area].insert(id);
    }
  }
  for (std::size_t a = 0; a < kNumAreas; ++a) {
    out.counts[a].assign(out.years.size(), 0);
    out.ratios[a].assign(out.years.size(), 0.0);
    for (const auto& id : members[a]) ++out.counts[a][slot.at(years.at(id))];
    for (std::size_t i = 0; i < out.years.size(); ++i) {
      out.ratios[a][i] = static_cast<double>(out.counts[a][i]) / static_cast<double>(out.docs_per_year[i]);
    }
    out.totals[a] = members[a].size();
  }
  return out;
}

HistoricalSeries historical_ratio_series(const std::vector<TopicAssignment>& assignments,
                                         const std::vector<TopicTags>& tags, const std::vector<DocInfo>& docs,
                                         int from_year) {
  const auto years = year_index(docs);
  std::unordered_set<std::string> historical;
  for (const auto& a : assignments) {
    if (!tag_of(tags, a.topic_id).historical) continue;
    for (const auto& [id, p] : a.docs) {
      year_of(years, id);
      historical.insert(id);
    }
  }
  std::map<int, std::pair<std::size_t, std::size_t>> per_year;  // year -> (historical, total)
  std::unordered_set<std::string> counted;
  for (const auto& d : docs) {
    if (d.year < from_year || !counted.insert(d.id).second) continue;
    auto& [h, n] = per_year[d.year];
    ++n;
    if (historical.contains(d.id)) ++h;
  }
  HistoricalSeries out;
  for (const auto& [y, hn] : per_year) {
    out.points.push_back({y, hn.first, hn.second, static_cast<double>(hn.first) / static_cast<double>(hn.second)});
    out.historical += hn.first;
    out.total += hn.second;
  }
  if (out.total > 0) out.overall_ratio = static_cast<double>(out.historical) / static_cast<double>(out.total);
  return out;
}

std::vector<SubareaRow> subarea_table(const std::vector<TopicAssignment>& assignments,
                                      const std::vector<TopicTags>& tags) {
  std::map<std::pair<std::size_t, std::string>, std::pair<std::size_t, std::set<std::string>>> groups;
  for (const auto& t : tags) {
    for (const auto& s : t.subareas) ++groups[{area_index(t.main_area), s}].first;
  }
  for (const auto& a : assignments) {
    const auto& t = tag_of(tags, a.topic_id);
    for (const auto& s : t.subareas) {
      auto& docs = groups[{area_index(t.main_area), s}].second;
      for (const auto& [id, p] : a.docs) docs.insert(id);
    }
  }
  std::vector<SubareaRow> rows;
  for (const auto& [key, value] : groups) {
    rows.push_back({kAllAreas[key.first], key.second, value.first, value.second.size()});
  }
  std::sort(rows.begin(), rows.end(), [](const SubareaRow& a, const SubareaRow& b) {
    if (a.area != b.area) return area_index(a.area) < area_index(b.area);
    if (a.documents != b.documents) return a.documents > b.documents;
    return a.subarea < b.subarea;
  });
  return rows;
}

std::vector<SubareaSeries> largest_subarea_series(const std::vector<TopicAssignment>& assignments,
                                                  const std::vector<TopicTags>& tags,
                                                  const std::vector<DocInfo>& docs) {
  const auto years = year_index(docs);
  std::set<int> all_years;
  for (const auto& d : docs) all_years.insert(d.year);
  const auto rows = subarea_table(assignments, tags);
  std::vector<SubareaSeries> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i - 1].area == rows[i].area) continue;
    SubareaSeries series;
    series.area = rows[i].area;
    series.subarea = rows[i].subarea;
    std::set<std::string> members;
    for (const auto& a : assignments) {
      const auto& t = tag_of(tags, a.topic_id);
      if (t.main_area != series.area ||
          std::find(t.subareas.begin(), t.subareas.end(), series.subarea) == t.subareas.end()) {
        continue;
      }
      for (const auto& [id, p] : a.docs) members.insert(id);
    }
    std::map<int, std::size_t> counts;
    for (const auto& id : members) ++counts[year_of(years, id)];
    for (int y : all_years) {
      series.years.push_back(y);
      series.counts.push_back(counts.contains(y) ? counts[y] : 0);
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<HistoricalTopicRow> historical_topic_table(const model::FittedModel& model,
                                                      const std::vector<TopicAssignment>& assignments,
                                                      const std::vector<TopicTags>& tags, std::size_t per_area,
                                                      std::size_t top_words) {
  std::vector<std::size_t> doc_counts(model.num_topics(), 0);
  for (const auto& a : assignments) {
    if (a.topic_id < doc_counts.size()) doc_counts[a.topic_id] = a.docs.size();
  }
  std::vector<HistoricalTopicRow> rows;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    const auto& t = tag_of(tags, k);
    if (!t.historical) continue;
    HistoricalTopicRow row{t.main_area, k, t.subareas, doc_counts[k], {}};
    for (std::size_t v : model::top_words(model.time_averaged_distribution(k), top_words)) {
      row.top_words.push_back(model.vocabulary[v]);
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.area != b.area) return area_index(a.area) < area_index(b.area);
    if (a.documents != b.documents) return a.documents > b.documents;
    return a.topic_id < b.topic_id;
  });
  std::vector<HistoricalTopicRow> out;
  std::array<std::size_t, kNumAreas> taken{};
  for (auto& r : rows) {
    if (taken[area_index(r.area)]++ < per_area) out.push_back(std::move(r));
  }
  return out;
}

std::vector<PeriodStats> period_stats(const ingest::TimeSlicedCorpus& corpus) {
  std::vector<PeriodStats> out;
  for (const auto& s : corpus.slices) {
    PeriodStats p{s.label, s.start_year, s.end_year, s.docs.size(), 0.0};
    std::size_t tokens = 0;
    for (const auto& d : s.docs) tokens += d.length();
    if (!s.docs.empty()) p.average_length = static_cast<double>(tokens) / static_cast<double>(s.docs.size());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace topictrend::analysis
