#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/error.hpp"
#include "topictrend/ingest/documents.hpp"

namespace topictrend::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "tt") {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Kind of the topictrend::Error thrown by f, or "" when nothing is thrown.
inline std::string error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

inline std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Corpus from token lists, one slice per distinct year, min_df = 1.
inline ingest::TimeSlicedCorpus corpus_from_tokens(const std::vector<std::pair<int, ingest::TokenList>>& docs,
                                                   int bin_years = 1) {
  std::vector<ingest::CleanDocument> clean;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "d%03zu", i);
    clean.push_back({id, docs[i].first, docs[i].second, 0});
  }
  return ingest::build_time_slices(clean, bin_years, 1);
}

// Corpus whose documents are random bags over `vocab` words, spread over
// `years` consecutive years starting at 2000.
inline ingest::TimeSlicedCorpus random_corpus(std::size_t num_docs, std::size_t vocab, std::size_t words_per_doc,
                                              int years, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, ingest::TokenList>> docs;
  for (std::size_t d = 0; d < num_docs; ++d) {
    ingest::TokenList tokens;
    // Skewed word choice so documents differ in their support.
    const std::size_t span = 3 + rng() % vocab;
    const std::size_t offset = rng() % vocab;
    for (std::size_t i = 0; i < words_per_doc; ++i) {
      char w[32];
      std::snprintf(w, sizeof w, "w%03zu", (offset + rng() % span) % vocab);
      tokens.push_back(w);
    }
    docs.push_back({2000 + static_cast<int>(d % static_cast<std::size_t>(years)), tokens});
  }
  return corpus_from_tokens(docs);
}

// A small Spanish-flavoured document collection with dictionaries, a tags
// file and a config, laid out like a real project directory. Content is a
// pure function of (num_docs, seed).
struct FixtureFiles {
  std::filesystem::path root;
  std::filesystem::path config;
};

inline FixtureFiles write_fixture(const std::filesystem::path& root, std::size_t num_docs, std::uint64_t seed,
                                  int num_topics = 3) {
  const std::vector<std::vector<std::string>> themes = {
      {"moral", "principio", "experiencia", "vida", "valor", "deber", "virtud", "justicia", "bien", "libertad"},
      {"kant", "razón", "crítica", "concepto", "objeto", "trascendental", "juicio", "intuición", "categoría", "sujeto"},
      {"lógica", "número", "teoría", "ciencia", "prueba", "axioma", "conjunto", "cálculo", "modelo", "verdad"},
  };
  const std::vector<std::string> stop = {"el", "la", "de", "que", "los", "una", "por", "con", "para"};
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::map<std::string, int> freq;
  std::ostringstream meta;
  meta << "{";
  for (std::size_t d = 0; d < num_docs; ++d) {
    char id[32];
    std::snprintf(id, sizeof id, "art%03zu", d);
    const int year = 1990 + static_cast<int>(d % 10);
    const std::size_t main_theme = pick(themes.size());
    const std::size_t side_theme = pick(themes.size());
    std::ostringstream text;
    for (std::size_t i = 0; i < 60; ++i) {
      const auto& theme = (pick(4) == 0) ? themes[side_theme] : themes[main_theme];
      std::string word = theme[pick(theme.size())];
      ++freq[word];
      if (i % 7 == 3) text << stop[pick(stop.size())] << ' ';
      // Occasional misspelling that correction should repair.
      if (word == "teoría" && pick(3) == 0) word = "teoria";
      text << word << (i % 12 == 11 ? ". " : " ");
    }
    const bool markup = d % 4 == 0;
    const std::string body = markup ? "<html><body><p>" + text.str() + "</p><script>ignorar()</script></body></html>"
                                    : text.str();
    write_text(root / "docs" / (std::string(id) + (markup ? ".html" : ".txt")), body);
    meta << (d ? ", " : "") << "\"" << id << "\": {\"year\": " << year
         << ", \"language\": \"es\", \"title\": \"Artículo " << d << "\", \"authors\": \"Autor " << d % 7 << "\"}";
  }
  meta << "}\n";
  write_text(root / "docs" / "metadata.json", meta.str());

  std::ostringstream freq_file;
  for (const auto& [w, c] : freq) freq_file << w << ' ' << c + 10 << '\n';
  for (const auto& s : stop) freq_file << s << " 1000\n";
  write_text(root / "dict" / "frequency.txt", freq_file.str());
  std::ostringstream stop_file;
  for (const auto& s : stop) stop_file << s << '\n';
  stop_file << "bien\n";
  write_text(root / "dict" / "stopwords.txt", stop_file.str());
  write_text(root / "dict" / "protected.txt", "bien\nverdad\n");
  write_text(root / "dict" / "lemmas.txt", "categorías categoría\nprincipios principio\n");

  std::ostringstream tags;
  tags << "topic_id\tmain_area\tsubareas\thistorical\n";
  tags << "0\tValueTheory\tEthics;Political philosophy\tfalse\n";
  tags << "1\tHistoryWesternPhil\tKant;Epistemology\ttrue\n";
  if (num_topics > 2) tags << "2\tScienceLogicMath\tLogic\tfalse\n";
  write_text(root / "tags.tsv", tags.str());

  std::ostringstream cfg;
  cfg << "[paths]\n"
      << "corpus_dir = \"docs\"\n"
      << "frequency_dict = \"dict/frequency.txt\"\n"
      << "stopwords = \"dict/stopwords.txt\"\n"
      << "protected_words = \"dict/protected.txt\"\n"
      << "lemma_table = \"dict/lemmas.txt\"\n"
      << "output_dir = \"out\"\n"
      << "tags_file = \"tags.tsv\"\n\n"
      << "[ingest]\nbin_years = 2\nmin_df = 2\n\n"
      << "[model]\nK = " << num_topics << "\nseed = 7\nmax_iters = 20\n\n"
      << "[grid]\nk_values = [2, 3]\nseeds = [1, 2]\n\n"
      << "[analysis]\nassignment_mass = 0.5\nfrom_year = 1990\n";
  write_text(root / "config.toml", cfg.str());
  return {root, root / "config.toml"};
}

}  // namespace topictrend::testing
