#include "topictrend/ingest/spell.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "topictrend/error.hpp"
#include "topictrend/ingest/utf8.hpp"

namespace topictrend::ingest {

int osa_distance(std::u32string_view a, std::u32string_view b, int limit) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (std::abs(n - m) > limit) return limit + 1;
  // Three rolling rows: i-2, i-1, i.
  std::vector<int> prev2(m + 1), prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), 0);
  int prev_row_min = 0;
  for (int i = 1; i <= n; ++i) {
    cur[0] = i;
    int row_min = cur[0];
    for (int j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      int d = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        d = std::min(d, prev2[j - 2] + 1);
      }
      cur[j] = d;
      row_min = std::min(row_min, d);
    }
    // Transpositions reach back two rows, so both must exceed the limit.
    if (row_min > limit && prev_row_min > limit) return limit + 1;
    prev_row_min = row_min;
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return std::min(prev[m], limit + 1);
}

namespace {

void collect_deletes(const std::u32string& word, int depth, std::unordered_set<std::u32string>& out) {
  if (depth == 0 || word.empty()) return;
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::u32string shorter = word.substr(0, i) + word.substr(i + 1);
    if (out.insert(shorter).second) collect_deletes(shorter, depth - 1, out);
  }
}

std::unordered_set<std::u32string> delete_neighborhood(const std::u32string& word, int depth) {
  std::unordered_set<std::u32string> out{word};
  collect_deletes(word, depth, out);
  return out;
}

}  // namespace

SpellIndex::SpellIndex(std::vector<std::pair<std::string, double>> words, int max_distance)
    : max_distance_(max_distance) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              words.end());
  words_.reserve(words.size());
  for (auto& [word, freq] : words) {
    const auto id = static_cast<std::uint32_t>(words_.size());
    words32_.push_back(utf8::decode(word));
    words_.push_back(std::move(word));
    frequency_.push_back(freq);
    for (const auto& variant : delete_neighborhood(words32_.back(), max_distance_)) {
      deletes_[variant].push_back(id);
    }
  }
}

std::vector<SpellCandidate> SpellIndex::candidates(const std::string& token, int max_distance) const {
  max_distance = std::min(max_distance, max_distance_);
  const std::u32string query = utf8::decode(token);
  std::unordered_set<std::uint32_t> seen;
  std::vector<SpellCandidate> out;
  for (const auto& variant : delete_neighborhood(query, max_distance)) {
    const auto it = deletes_.find(variant);
    if (it == deletes_.end()) continue;
    for (std::uint32_t id : it->second) {
      if (!seen.insert(id).second) continue;
      const int d = osa_distance(query, words32_[id], max_distance);
      if (d <= max_distance) out.push_back({words_[id], d, frequency_[id]});
    }
  }
  return out;
}

namespace {

bool better(const SpellCandidate& a, const SpellCandidate& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.word < b.word;
}

std::optional<std::string> best_replacement(const std::string& token, const DictionaryBundle& dicts,
                                            int max_edit_distance) {
  std::optional<SpellCandidate> best;
  auto offer = [&best](SpellCandidate c) {
    if (!best || better(c, *best)) best = std::move(c);
  };
  if (max_edit_distance > 0) {
    for (auto& c : dicts.spell_index().candidates(token, max_edit_distance)) offer(std::move(c));
  }
  for (const auto& [wrong, right] : dicts.confusions()) {
    for (std::size_t at = token.find(wrong); at != std::string::npos; at = token.find(wrong, at + 1)) {
      std::string rewritten = token.substr(0, at) + right + token.substr(at + wrong.size());
      if (dicts.recognizes(rewritten)) {
        offer({rewritten, 1, dicts.frequency(rewritten)});
      }
    }
  }
  if (!best) return std::nullopt;
  return best->word;
}

}  // namespace

CorrectionResult correct_orthography(const TokenList& tokens, const DictionaryBundle& dicts,
                                     int max_edit_distance) {
  if (dicts.frequencies().empty()) {
    throw data_error("EmptyDictionary", "frequency dictionary has no entries");
  }
  CorrectionResult result;
  result.tokens.reserve(tokens.size());
  std::unordered_map<std::string, std::optional<std::string>> memo;
  std::unordered_set<std::string> changed;
  for (const auto& token : tokens) {
    const std::string key = utf8::to_lower(token);
    if (dicts.recognizes(key)) {
      result.tokens.push_back(token);
      continue;
    }
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, best_replacement(key, dicts, max_edit_distance)).first;
    if (it->second) {
      result.tokens.push_back(*it->second);
      ++result.corrected_count;
      changed.insert(token);
    } else {
      result.tokens.push_back(token);
    }
  }
  result.corrected_types.assign(changed.begin(), changed.end());
  std::sort(result.corrected_types.begin(), result.corrected_types.end());
  return result;
}

double recognition_ratio(const TokenList& tokens, const DictionaryBundle& dicts) {
  if (tokens.empty()) return 1.0;
  std::size_t known = 0;
  for (const auto& t : tokens) {
    if (dicts.recognizes(utf8::to_lower(t))) ++known;
  }
  return static_cast<double>(known) / static_cast<double>(tokens.size());
}

}  // namespace topictrend::ingest
