#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topictrend/ingest/dictionary.hpp"
#include "topictrend/ingest/tokenize.hpp"

namespace topictrend::ingest {

// Optimal-string-alignment distance (Levenshtein plus adjacent
// transposition) over code points. Returns `limit + 1` as soon as the
// distance is known to exceed `limit`.
int osa_distance(std::u32string_view a, std::u32string_view b, int limit = 1 << 20);

struct SpellCandidate {
  std::string word;
  int distance = 0;
  double frequency = 0.0;
};

// Symmetric-delete lookup table: every dictionary word is indexed under
// all strings reachable by deleting up to `max_distance` code points.
// A query generates its own deletions and verifies hits with osa_distance.
class SpellIndex {
 public:
  SpellIndex(std::vector<std::pair<std::string, double>> words, int max_distance);

  // All dictionary words within `max_distance` of `token`, in no particular order.
  std::vector<SpellCandidate> candidates(const std::string& token, int max_distance) const;

  int max_distance() const { return max_distance_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::vector<std::u32string> words32_;
  std::vector<double> frequency_;
  std::unordered_map<std::u32string, std::vector<std::uint32_t>> deletes_;
  int max_distance_;
};

struct CorrectionResult {
  TokenList tokens;
  // Replaced token occurrences.
  std::size_t corrected_count = 0;
  // Distinct original tokens that were replaced at least once, sorted.
  std::vector<std::string> corrected_types;
};

// Replaces every unrecognized token with the most frequent dictionary word
// within `max_edit_distance` (ties: lexicographically smallest). Candidates
// also include single OCR-confusion rewrites from the bundle. Tokens with
// no candidate are kept. Lookup is case-insensitive.
//
// Throws EmptyDictionary when the frequency dictionary is empty.
CorrectionResult correct_orthography(const TokenList& tokens, const DictionaryBundle& dicts,
                                     int max_edit_distance = 2);

// Fraction of token occurrences recognized by the bundle; 1.0 when empty.
double recognition_ratio(const TokenList& tokens, const DictionaryBundle& dicts);

}  // namespace topictrend::ingest
