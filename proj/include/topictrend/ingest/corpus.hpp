#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topictrend/ingest/documents.hpp"

namespace topictrend::ingest {

using WordId = std::uint32_t;

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<WordId> find(const std::string& word) const;

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

// Bag of words with (word id, count) entries sorted by word id.
struct SparseDocument {
  std::string id;
  int year = 0;
  std::vector<std::pair<WordId, std::uint32_t>> counts;

  std::size_t length() const;
  bool operator==(const SparseDocument&) const = default;
};

struct TimeSlice {
  std::string label;
  int start_year = 0;
  int end_year = 0;
  std::vector<SparseDocument> docs;

  bool operator==(const TimeSlice&) const = default;
};

struct SliceRule {
  int first_year = 0;
  int bin_years = 1;
  int min_df = 1;
  // Labels of periods between the first and last slice with no documents.
  std::vector<std::string> dropped_periods;
  // Documents with no tokens left after vocabulary pruning.
  std::vector<std::string> empty_documents;

  bool operator==(const SliceRule&) const = default;
};

struct TimeSlicedCorpus {
  Vocabulary vocabulary;
  std::vector<TimeSlice> slices;
  SliceRule rule;

  std::size_t num_documents() const;
  std::size_t num_tokens() const;

  // Raises DimensionMismatch if any index is out of range or slices are
  // unordered.
  void validate() const;

  bool operator==(const TimeSlicedCorpus& other) const {
    return vocabulary == other.vocabulary && slices == other.slices && rule == other.rule;
  }
};

std::string period_label(int start_year, int bin_years);

// Bins documents by floor((year - first_year) / bin_years); empty bins are
// dropped and recorded. The vocabulary keeps tokens whose document
// frequency is at least `min_df` and is sorted lexicographically.
//
// Throws EmptyCorpus for no documents, AllTokensFiltered when nothing
// survives pruning.
TimeSlicedCorpus build_time_slices(const std::vector<CleanDocument>& docs, int bin_years, int min_df = 2);

nlohmann::json corpus_to_json(const TimeSlicedCorpus& corpus);
TimeSlicedCorpus corpus_from_json(const nlohmann::json& j);

void save_corpus(const TimeSlicedCorpus& corpus, const std::filesystem::path& path);
TimeSlicedCorpus load_corpus(const std::filesystem::path& path);

// Document frequency for every vocabulary entry across all slices.
std::vector<std::uint32_t> document_frequencies(const TimeSlicedCorpus& corpus);

}  // namespace topictrend::ingest
