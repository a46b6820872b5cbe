#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topictrend/ingest/dictionary.hpp"
#include "topictrend/ingest/preprocess.hpp"
#include "topictrend/pipeline/config.hpp"

namespace topictrend::pipeline {

// Corpus-level counts of the ingest report.
struct IngestSummary {
  std::size_t documents = 0;
  std::size_t words = 0;            // tokens after normalization
  std::size_t unique_words = 0;     // distinct such tokens
  std::size_t corrected_words = 0;  // token types changed at least once by correction
  std::size_t corrected_tokens = 0;
  double average_length = 0.0;      // tokens per document after the full pipeline
  std::size_t stopwords = 0;
  std::size_t protected_words = 0;
  double recognition_before = 1.0;  // over all tokens of the corpus
  double recognition_after = 1.0;
  double mean_recognition_before = 1.0;  // average of per-document ratios
  double mean_recognition_after = 1.0;
};

IngestSummary summarize_ingest(const std::vector<ingest::PreprocessedDocument>& docs,
                               const ingest::DictionaryBundle& dicts);

// Output layout below the output root.
std::filesystem::path ingest_dir(const std::filesystem::path& root);
std::filesystem::path corpus_path(const std::filesystem::path& root);
std::filesystem::path model_dir(const std::filesystem::path& root, int k, std::uint64_t seed);
std::filesystem::path grid_dir(const std::filesystem::path& root);
std::filesystem::path assign_dir(const std::filesystem::path& root);
std::filesystem::path reports_dir(const std::filesystem::path& root);
std::filesystem::path trend_dir(const std::filesystem::path& root);

struct CommandOptions {
  std::filesystem::path config_file;  // recorded in manifests when set
  std::optional<std::filesystem::path> corpus;  // default: <out>/ingest/corpus.json
  std::optional<std::filesystem::path> model;   // default: <out>/models/<K>-<seed>
  std::optional<std::filesystem::path> input;   // trend: CSV with year,ratio columns
};

struct CommandResult {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;
};

// Each command holds the output-root lock, writes its files and appends
// one run to its directory's manifest. Errors are topictrend::Error.
CommandResult cmd_ingest(const PipelineConfig& config, const CommandOptions& options = {});
CommandResult cmd_train(const PipelineConfig& config, const CommandOptions& options = {});
CommandResult cmd_grid(const PipelineConfig& config, const CommandOptions& options = {});
CommandResult cmd_assign(const PipelineConfig& config, const CommandOptions& options = {});
CommandResult cmd_report(const PipelineConfig& config, const CommandOptions& options = {});
CommandResult cmd_trend(const PipelineConfig& config, const CommandOptions& options = {});

}  // namespace topictrend::pipeline
