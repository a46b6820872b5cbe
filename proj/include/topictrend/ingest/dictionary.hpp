#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace topictrend::ingest {

class SpellIndex;

// Raw dictionary material as read from disk, before normalization.
struct DictionarySources {
  std::vector<std::pair<std::string, double>> frequency_counts;
  std::vector<std::string> custom_words;
  std::vector<std::pair<std::string, std::string>> lemma_pairs;
  std::vector<std::string> stopwords;
  std::vector<std::string> protected_words;
  // OCR confusion rewrites (wrong sequence, intended sequence), applied as
  // single-edit candidates during correction.
  std::vector<std::pair<std::string, std::string>> confusions = {{"lvl", "m"}};
};

// Immutable lexical resources used by every preprocessing stage.
//
// Construction normalizes all entries to lowercase single tokens and
// enforces the cross-list invariants:
//   * protected words are never stopwords;
//   * protected words are not in the lemma table's domain;
//   * lemma chains are resolved so every lemma maps to itself;
//   * lemma targets count as recognized words;
//   * a surface form whose lemma is a stopword is itself a stopword.
class DictionaryBundle {
 public:
  DictionaryBundle() = default;
  explicit DictionaryBundle(const DictionarySources& sources, int max_edit_distance = 2);

  // Loads files from disk. Empty paths are skipped. Throws ParseError.
  static DictionarySources read_sources(const std::filesystem::path& frequency_file,
                                        const std::filesystem::path& custom_file,
                                        const std::filesystem::path& lemma_file,
                                        const std::filesystem::path& stopword_file,
                                        const std::filesystem::path& protected_file,
                                        const std::filesystem::path& confusion_file = {});

  bool recognizes(const std::string& token) const;
  bool is_stopword(const std::string& token) const { return stopwords_.count(token) > 0; }
  bool is_protected(const std::string& token) const { return protected_.count(token) > 0; }
  // Relative frequency, 0 for unknown words.
  double frequency(const std::string& token) const;
  const std::string* lemma_of(const std::string& token) const;

  const std::unordered_map<std::string, double>& frequencies() const { return frequency_; }
  const std::unordered_set<std::string>& custom() const { return custom_; }
  const std::unordered_map<std::string, std::string>& lemma_table() const { return lemmas_; }
  const std::unordered_set<std::string>& stopwords() const { return stopwords_; }
  const std::unordered_set<std::string>& protected_words() const { return protected_; }
  const std::vector<std::pair<std::string, std::string>>& confusions() const { return confusions_; }

  const SpellIndex& spell_index() const;
  int max_edit_distance() const { return max_edit_distance_; }

 private:
  std::unordered_map<std::string, double> frequency_;
  std::unordered_set<std::string> custom_;
  std::unordered_map<std::string, std::string> lemmas_;
  std::unordered_set<std::string> stopwords_;
  std::unordered_set<std::string> protected_;
  std::vector<std::pair<std::string, std::string>> confusions_;
  std::shared_ptr<const SpellIndex> spell_;
  int max_edit_distance_ = 2;
};

// Reads a one-token-per-line list. Blank lines and '#' comments are skipped.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

// Reads two whitespace-separated columns per line.
std::vector<std::pair<std::string, std::string>> read_two_columns(
    const std::filesystem::path& path);

}  // namespace topictrend::ingest
