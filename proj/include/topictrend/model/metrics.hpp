#pragma once

#include <string>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::model {

// Per-word negative average log-likelihood of `heldout` under `model`.
// Each held-out document is folded in against its year's slice; word
// probabilities are sum_k theta_k softmax(beta_{k,t})_w. Lower is better.
// Throws VocabularyMismatch when a held-out word is not in the model.
double log_perplexity(const FittedModel& model, const ingest::TimeSlicedCorpus& heldout);

inline constexpr const char* kCoherenceVariant = "umass_document_cooccurrence";

struct CoherenceResult {
  std::vector<double> per_topic;
  double average = 0.0;
  std::string variant = kCoherenceVariant;
};

// Document co-occurrence coherence. For each topic the top_n words by
// time-averaged probability (ties by word id) are scored with
//   sum_{i=1}^{n-1} sum_{j<i} log((D(w_i, w_j) + 1) / D(w_j)),
// where D counts documents of `corpus`; D(w_j) is floored at 1.
// Throws InvalidArgument for top_n < 2.
CoherenceResult topic_coherence(const FittedModel& model, const ingest::TimeSlicedCorpus& corpus,
                                std::size_t top_n = 10);

// Indices of the top_n words of a distribution, highest first, ties by index.
std::vector<std::size_t> top_words(const std::vector<double>& distribution, std::size_t top_n);

}  // namespace topictrend::model
