#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topictrend/ingest/documents.hpp"
#include "topictrend/model/fitted_model.hpp"
#include "topictrend/selection/grid.hpp"
#include "topictrend/selection/ranking.hpp"

namespace topictrend::pipeline {

// Flat view of a TOML-style file: `[section]` headers and `key = value`
// lines, keyed as "section.key". Values are strings, numbers, booleans or
// one-line arrays; '#' starts a comment outside quotes.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> string(const std::string& key) const;
  std::optional<double> number(const std::string& key) const;
  std::optional<long long> integer(const std::string& key) const;
  std::optional<bool> boolean(const std::string& key) const;
  std::optional<std::vector<std::string>> list(const std::string& key) const;
  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // unparsed value text
  std::map<std::string, std::size_t> lines_;
};

struct PathsConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path frequency_dict;
  std::filesystem::path custom_words;
  std::filesystem::path lemma_table;
  std::filesystem::path stopwords;
  std::filesystem::path protected_words;
  std::filesystem::path confusions;
  std::filesystem::path output_dir = "out";
  std::filesystem::path tags_file;
};

struct IngestConfig {
  int bin_years = 1;
  int min_df = 2;
  std::vector<std::string> languages;  // empty: keep every language
  int max_edit_distance = 2;
  std::size_t min_len = 3;
  int first_year = 1900;
  int last_year = 2100;
};

struct AnalysisConfig {
  double assignment_mass = 0.5;
  std::optional<int> from_year;
  std::size_t top_n = 10;
  std::size_t historical_per_area = 5;
};

struct PipelineConfig {
  PathsConfig paths;
  IngestConfig ingest;
  model::Hyperparams hyper;
  model::DtmOptions dtm;
  selection::GridSpec grid;
  selection::RankWeights weights;
  AnalysisConfig analysis;
  unsigned workers = 1;

  // Relative paths in the file resolve against the file's directory.
  static PipelineConfig from_file(const ConfigFile& file, const std::filesystem::path& base_dir);

  nlohmann::json to_json() const;
};

}  // namespace topictrend::pipeline
