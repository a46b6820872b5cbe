#include "topictrend/ingest/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "topictrend/error.hpp"

namespace topictrend::ingest {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw data_error("ParseError", "duplicate vocabulary entry '" + words_[i] + "'");
    }
  }
}

std::optional<WordId> Vocabulary::find(const std::string& word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SparseDocument::length() const {
  std::size_t n = 0;
  for (const auto& [w, c] : counts) n += c;
  return n;
}

std::size_t TimeSlicedCorpus::num_documents() const {
  std::size_t n = 0;
  for (const auto& s : slices) n += s.docs.size();
  return n;
}

std::size_t TimeSlicedCorpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& s : slices) {
    for (const auto& d : s.docs) n += d.length();
  }
  return n;
}

void TimeSlicedCorpus::validate() const {
  for (std::size_t t = 0; t < slices.size(); ++t) {
    if (t > 0 && slices[t].start_year <= slices[t - 1].start_year) {
      throw numerical_error("DimensionMismatch", "slices are not strictly ordered by start year");
    }
    for (const auto& d : slices[t].docs) {
      for (const auto& [w, c] : d.counts) {
        if (w >= vocabulary.size()) {
          throw numerical_error("DimensionMismatch", "document '" + d.id + "' references word " +
                                                         std::to_string(w) + " outside vocabulary");
        }
      }
    }
  }
}

std::string period_label(int start_year, int bin_years) {
  if (bin_years <= 1) return std::to_string(start_year);
  return std::to_string(start_year) + "-" + std::to_string(start_year + bin_years - 1);
}

TimeSlicedCorpus build_time_slices(const std::vector<CleanDocument>& docs, int bin_years, int min_df) {
  if (docs.empty()) throw data_error("EmptyCorpus", "no documents to slice");
  if (bin_years < 1) throw usage_error("InvalidArgument", "bin_years must be >= 1");

  std::map<std::string, std::uint32_t> df;
  for (const auto& d : docs) {
    std::set<std::string> unique(d.tokens.begin(), d.tokens.end());
    for (const auto& t : unique) ++df[t];
  }
  std::vector<std::string> words;
  for (const auto& [word, n] : df) {
    if (static_cast<int>(n) >= min_df) words.push_back(word);
  }
  if (words.empty()) throw data_error("AllTokensFiltered", "no token reaches min_df = " + std::to_string(min_df));

  TimeSlicedCorpus corpus;
  corpus.vocabulary = Vocabulary(std::move(words));
  corpus.rule.bin_years = bin_years;
  corpus.rule.min_df = min_df;
  const int first_year = std::min_element(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
                           return a.year < b.year;
                         })->year;
  corpus.rule.first_year = first_year;

  std::map<int, std::vector<SparseDocument>> bins;
  for (const auto& d : docs) {
    std::map<WordId, std::uint32_t> counts;
    for (const auto& t : d.tokens) {
      if (const auto id = corpus.vocabulary.find(t)) ++counts[*id];
    }
    if (counts.empty()) {
      corpus.rule.empty_documents.push_back(d.id);
      continue;
    }
    SparseDocument sd{d.id, d.year, {counts.begin(), counts.end()}};
    const int bin = (d.year - first_year) / bin_years;  // first_year is the minimum
    bins[bin].push_back(std::move(sd));
  }
  std::sort(corpus.rule.empty_documents.begin(), corpus.rule.empty_documents.end());
  if (bins.empty()) throw data_error("AllTokensFiltered", "every document is empty after pruning");

  int previous = bins.begin()->first;
  for (auto& [bin, members] : bins) {
    for (int gap = previous + 1; gap < bin; ++gap) {
      corpus.rule.dropped_periods.push_back(period_label(first_year + gap * bin_years, bin_years));
    }
    previous = bin;
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
      return a.year != b.year ? a.year < b.year : a.id < b.id;
    });
    TimeSlice slice;
    slice.start_year = first_year + bin * bin_years;
    slice.end_year = slice.start_year + bin_years - 1;
    slice.label = period_label(slice.start_year, bin_years);
    slice.docs = std::move(members);
    corpus.slices.push_back(std::move(slice));
  }
  return corpus;
}

nlohmann::json corpus_to_json(const TimeSlicedCorpus& corpus) {
  nlohmann::json j;
  j["format"] = "topictrend-corpus";
  j["version"] = 1;
  j["vocabulary"] = corpus.vocabulary.words();
  j["slice_rule"] = {{"first_year", corpus.rule.first_year},
                     {"bin_years", corpus.rule.bin_years},
                     {"min_df", corpus.rule.min_df},
                     {"dropped_periods", corpus.rule.dropped_periods},
                     {"empty_documents", corpus.rule.empty_documents}};
  auto& slices = j["slices"] = nlohmann::json::array();
  for (const auto& s : corpus.slices) {
    nlohmann::json js = {{"period", s.label}, {"start_year", s.start_year}, {"end_year", s.end_year}};
    auto& docs = js["documents"] = nlohmann::json::array();
    for (const auto& d : s.docs) {
      nlohmann::json counts = nlohmann::json::array();
      for (const auto& [w, c] : d.counts) counts.push_back({w, c});
      docs.push_back({{"id", d.id}, {"year", d.year}, {"counts", std::move(counts)}});
    }
    slices.push_back(std::move(js));
  }
  return j;
}

TimeSlicedCorpus corpus_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "topictrend-corpus") {
      throw data_error("ParseError", "not a corpus archive");
    }
    TimeSlicedCorpus corpus;
    corpus.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    const auto& rule = j.at("slice_rule");
    corpus.rule.first_year = rule.at("first_year").get<int>();
    corpus.rule.bin_years = rule.at("bin_years").get<int>();
    corpus.rule.min_df = rule.at("min_df").get<int>();
    corpus.rule.dropped_periods = rule.at("dropped_periods").get<std::vector<std::string>>();
    corpus.rule.empty_documents = rule.value("empty_documents", std::vector<std::string>{});
    for (const auto& js : j.at("slices")) {
      TimeSlice s;
      s.label = js.at("period").get<std::string>();
      s.start_year = js.at("start_year").get<int>();
      s.end_year = js.at("end_year").get<int>();
      for (const auto& jd : js.at("documents")) {
        SparseDocument d;
        d.id = jd.at("id").get<std::string>();
        d.year = jd.at("year").get<int>();
        for (const auto& pair : jd.at("counts")) {
          d.counts.emplace_back(pair.at(0).get<WordId>(), pair.at(1).get<std::uint32_t>());
        }
        s.docs.push_back(std::move(d));
      }
      corpus.slices.push_back(std::move(s));
    }
    corpus.validate();
    return corpus;
  } catch (const nlohmann::json::exception& e) {
    throw data_error("ParseError", std::string("corpus archive: ") + e.what());
  }
}

void save_corpus(const TimeSlicedCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("ParseError", "cannot write " + path.string());
  out << corpus_to_json(corpus).dump() << '\n';
}

TimeSlicedCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("ParseError", "cannot read corpus archive " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error("ParseError", path.string() + ": " + e.what());
  }
  return corpus_from_json(j);
}

std::vector<std::uint32_t> document_frequencies(const TimeSlicedCorpus& corpus) {
  std::vector<std::uint32_t> df(corpus.vocabulary.size(), 0);
  for (const auto& s : corpus.slices) {
    for (const auto& d : s.docs) {
      for (const auto& [w, c] : d.counts) {
        if (c > 0) ++df[w];
      }
    }
  }
  return df;
}

}  // namespace topictrend::ingest
