#include "topictrend/ingest/dictionary.hpp"

#include <fstream>
#include <sstream>

#include "topictrend/error.hpp"
#include "topictrend/ingest/spell.hpp"
#include "topictrend/ingest/tokenize.hpp"
#include "topictrend/ingest/utf8.hpp"

namespace topictrend::ingest {

namespace {

// An entry is usable only if it normalizes to exactly one token.
std::optional<std::string> normalize_entry(const std::string& raw) {
  auto tokens = normalize_and_tokenize(raw, 1);
  if (tokens.size() != 1) return std::nullopt;
  return std::move(tokens.front());
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("ParseError", "cannot open " + path.string());
  return in;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    words.push_back(word);
  }
  return words;
}

std::vector<std::pair<std::string, std::string>> read_two_columns(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a >> b)) {
      throw data_error("ParseError", path.string() + ":" + std::to_string(line_no) +
                                         ": expected two columns");
    }
    rows.emplace_back(std::move(a), std::move(b));
  }
  return rows;
}

DictionarySources DictionaryBundle::read_sources(const std::filesystem::path& frequency_file,
                                                 const std::filesystem::path& custom_file,
                                                 const std::filesystem::path& lemma_file,
                                                 const std::filesystem::path& stopword_file,
                                                 const std::filesystem::path& protected_file,
                                                 const std::filesystem::path& confusion_file) {
  DictionarySources sources;
  if (!frequency_file.empty()) {
    for (auto& [word, count] : read_two_columns(frequency_file)) {
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(count, &used);
        if (used != count.size()) throw std::invalid_argument(count);
      } catch (const std::exception&) {
        throw data_error("ParseError", frequency_file.string() + ": bad count '" + count +
                                           "' for '" + word + "'");
      }
      if (value < 0.0) {
        throw data_error("ParseError", frequency_file.string() + ": negative count for '" + word + "'");
      }
      sources.frequency_counts.emplace_back(std::move(word), value);
    }
  }
  if (!custom_file.empty()) sources.custom_words = read_word_list(custom_file);
  if (!lemma_file.empty()) sources.lemma_pairs = read_two_columns(lemma_file);
  if (!stopword_file.empty()) sources.stopwords = read_word_list(stopword_file);
  if (!protected_file.empty()) sources.protected_words = read_word_list(protected_file);
  if (!confusion_file.empty()) sources.confusions = read_two_columns(confusion_file);
  return sources;
}

DictionaryBundle::DictionaryBundle(const DictionarySources& sources, int max_edit_distance)
    : max_edit_distance_(max_edit_distance) {
  double total = 0.0;
  for (const auto& [raw, count] : sources.frequency_counts) {
    if (count < 0.0) throw data_error("ParseError", "negative frequency for '" + raw + "'");
    if (auto w = normalize_entry(raw)) {
      frequency_[*w] += count;
      total += count;
    }
  }
  if (total > 0.0) {
    for (auto& [word, f] : frequency_) f /= total;
  }
  for (const auto& raw : sources.custom_words) {
    if (auto w = normalize_entry(raw)) custom_.insert(*w);
  }
  for (const auto& raw : sources.protected_words) {
    if (auto w = normalize_entry(raw)) protected_.insert(*w);
  }
  for (const auto& raw : sources.stopwords) {
    if (auto w = normalize_entry(raw); w && !protected_.count(*w)) stopwords_.insert(*w);
  }
  for (const auto& [wrong, right] : sources.confusions) {
    confusions_.emplace_back(utf8::to_lower(wrong), utf8::to_lower(right));
  }

  // Lemma table: drop protected surfaces, then resolve chains to fixed points.
  std::unordered_map<std::string, std::string> raw_lemmas;
  for (const auto& [surface_raw, lemma_raw] : sources.lemma_pairs) {
    auto surface = normalize_entry(surface_raw);
    auto lemma = normalize_entry(lemma_raw);
    if (!surface || !lemma || protected_.count(*surface)) continue;
    raw_lemmas.emplace(std::move(*surface), std::move(*lemma));
  }
  for (const auto& [surface, first] : raw_lemmas) {
    std::string target = first;
    std::unordered_set<std::string> visited{surface};
    while (true) {
      const auto next = raw_lemmas.find(target);
      if (next == raw_lemmas.end() || next->second == target || visited.count(target)) break;
      visited.insert(target);
      target = next->second;
    }
    if (target != surface) lemmas_.emplace(surface, std::move(target));
  }
  // Targets on a cycle would still map onward; make every target a fixed point.
  for (auto it = lemmas_.begin(); it != lemmas_.end();) {
    const auto onward = lemmas_.find(it->second);
    if (onward != lemmas_.end() && onward->second != it->second) {
      lemmas_.erase(onward);
      it = lemmas_.begin();
      continue;
    }
    ++it;
  }
  for (const auto& [surface, lemma] : lemmas_) {
    custom_.insert(lemma);
    if (stopwords_.count(lemma) && !protected_.count(surface)) stopwords_.insert(surface);
  }

  std::vector<std::pair<std::string, double>> spell_words;
  spell_words.reserve(frequency_.size() + custom_.size() + protected_.size());
  for (const auto& [w, f] : frequency_) spell_words.emplace_back(w, f);
  for (const auto& w : custom_) {
    if (!frequency_.count(w)) spell_words.emplace_back(w, 0.0);
  }
  for (const auto& w : protected_) {
    if (!frequency_.count(w) && !custom_.count(w)) spell_words.emplace_back(w, 0.0);
  }
  spell_ = std::make_shared<const SpellIndex>(std::move(spell_words), max_edit_distance_);
}

bool DictionaryBundle::recognizes(const std::string& token) const {
  return frequency_.count(token) || custom_.count(token) || protected_.count(token);
}

double DictionaryBundle::frequency(const std::string& token) const {
  const auto it = frequency_.find(token);
  return it == frequency_.end() ? 0.0 : it->second;
}

const std::string* DictionaryBundle::lemma_of(const std::string& token) const {
  const auto it = lemmas_.find(token);
  return it == lemmas_.end() ? nullptr : &it->second;
}

const SpellIndex& DictionaryBundle::spell_index() const {
  if (!spell_) {
    static const SpellIndex empty({}, 0);
    return empty;
  }
  return *spell_;
}

}  // namespace topictrend::ingest
