#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::model {

struct LdaOptions {
  int max_em_iters = 200;
  double em_tolerance = 1e-6;  // relative bound change
  int estep_max_iters = 100;
  double estep_tolerance = 1e-8;
  unsigned workers = 1;
};

struct LdaResult {
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<double> topic_word;  // [topic][word], rows sum to 1
  std::vector<double> gamma;       // [doc][topic] variational Dirichlet parameters
  std::vector<double> doc_theta;   // [doc][topic], gamma normalized
  std::vector<double> bound_history;
  int iterations = 0;
  bool converged = false;

  std::span<const double> topic(std::size_t k) const {
    return {topic_word.data() + k * vocab_size, vocab_size};
  }
  std::span<const double> theta(std::size_t d) const {
    return {doc_theta.data() + d * num_topics, num_topics};
  }
};

// Mean-field variational EM for LDA with a fixed symmetric Dirichlet prior
// `alpha` on the proportions. Topics are seeded from documents chosen
// k-means++ style (cosine distance) using `seed`. Per-document variational
// parameters are warm-started across EM iterations, so the recorded bound
// is non-decreasing.
//
// Throws EmptySlice when there are no tokens. A run that hits
// max_em_iters returns its last state with converged = false.
LdaResult fit_lda(std::span<const ingest::SparseDocument> docs, std::size_t vocab_size,
                  std::size_t num_topics, double alpha, std::uint64_t seed,
                  const LdaOptions& options = {});

// Wraps an LDA fit over `corpus` (all slices pooled, in slice order) as a
// FittedModel whose topics are constant over time.
FittedModel model_from_lda(const LdaResult& lda, const ingest::TimeSlicedCorpus& corpus,
                           const Hyperparams& hyper);

}  // namespace topictrend::model
