#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "topictrend/ingest/corpus.hpp"

namespace topictrend::model {

struct Hyperparams {
  int num_topics = 10;
  double sigma2 = 0.005;  // topic chain step variance
  double delta2 = 0.01;   // proportion chain step variance
  double a2 = 1.0;        // per-document proportion variance
  // Mean of the first proportion state; one entry is broadcast to all topics.
  std::vector<double> alpha0 = {1.0};
  std::uint64_t seed = 1;

  // Throws InvalidArgument unless K >= 2 and all variances are positive.
  void validate() const;
  std::vector<double> alpha0_vector() const;

  bool operator==(const Hyperparams&) const = default;
};

// Numerical settings of the fitting procedure (not part of the model).
struct DtmOptions {
  int max_iters = 100;
  double tolerance = 1e-4;       // relative bound change
  double obs_variance = 0.5;     // variance of the topic chains' pseudo-observations
  double initial_variance = 10;  // prior variance of the first chain states
  int init_lda_iters = 50;
  double init_lda_alpha = 0.1;
  double init_noise = 0.01;      // std-dev of symmetric noise added to the initial chains
  int estep_max_iters = 100;
  double estep_tolerance = 1e-6;
  int mstep_max_iters = 40;
  unsigned workers = 1;

  bool operator==(const DtmOptions&) const = default;
};

struct TrainLog {
  int iterations = 0;
  std::vector<double> bound_history;
  std::vector<double> relative_changes;
  double final_bound = 0.0;
  bool converged = false;

  bool operator==(const TrainLog&) const = default;
};

struct DocumentTopics {
  std::string id;
  int year = 0;
  std::size_t slice = 0;
  std::vector<double> eta;       // variational mean of the natural parameters
  std::vector<double> eta_var;   // variational variances
  std::vector<double> theta;     // softmax(eta)

  bool operator==(const DocumentTopics&) const = default;
};

struct Period {
  std::string label;
  int start_year = 0;
  int end_year = 0;

  bool operator==(const Period&) const = default;
};

// Fitted dynamic topic model: per-slice topic natural parameters, the
// proportion path and per-document proportions. Immutable after fitting.
struct FittedModel {
  Hyperparams hyper;
  DtmOptions options;
  std::vector<std::string> vocabulary;
  std::vector<Period> periods;
  // [topic][slice][word], natural parameters (variational means).
  std::vector<double> topic_natural;
  // [slice], posterior variance shared by every topic/word chain.
  std::vector<double> topic_variance;
  // [slice][topic]
  std::vector<double> alpha_mean;
  std::vector<double> alpha_variance;
  std::vector<DocumentTopics> documents;
  TrainLog train_log;
  std::string corpus_hash;

  std::size_t num_topics() const { return static_cast<std::size_t>(hyper.num_topics); }
  std::size_t num_slices() const { return periods.size(); }
  std::size_t vocab_size() const { return vocabulary.size(); }

  std::span<const double> natural(std::size_t topic, std::size_t slice) const;
  std::span<double> natural(std::size_t topic, std::size_t slice);
  // softmax of the natural parameters.
  std::vector<double> topic_distribution(std::size_t topic, std::size_t slice) const;
  // Average of topic_distribution over slices.
  std::vector<double> time_averaged_distribution(std::size_t topic) const;
  std::span<const double> alpha(std::size_t slice) const;

  bool operator==(const FittedModel&) const = default;
};

nlohmann::json hyperparams_to_json(const Hyperparams& h);
Hyperparams hyperparams_from_json(const nlohmann::json& j);
nlohmann::json options_to_json(const DtmOptions& o);
DtmOptions options_from_json(const nlohmann::json& j);

// Model archive: `model.json` (format version, hyperparameters, options,
// corpus hash, train log, vocabulary, periods) plus tab-separated matrices
// topics.tsv, topic_variance.tsv, alpha.tsv and documents.tsv. Doubles are
// written in shortest round-trip form so load(save(m)) == m bitwise.
void save_model(const FittedModel& model, const std::filesystem::path& dir);
FittedModel load_model(const std::filesystem::path& dir);

// Formats a double in shortest round-trip form.
std::string format_double(double x);
double parse_double(std::string_view s);

}  // namespace topictrend::model
