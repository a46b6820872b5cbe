#pragma once

#include <random>
#include <span>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::model {

using Rng = std::mt19937_64;

// Draws theta ~ Dirichlet(alpha) by normalizing independent Gamma(alpha_i, 1)
// draws. Throws NonPositiveAlpha.
std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng);

// Generates `n_words` word ids: topic k ~ Categorical(theta), then
// word ~ Categorical(betas[k]). Throws DimensionMismatch when theta and
// betas disagree or topics have different lengths.
std::vector<ingest::WordId> generate_lda_document(std::span<const double> theta,
                                                  const std::vector<std::vector<double>>& betas,
                                                  std::size_t n_words, Rng& rng);

struct DtmGeneratorOptions {
  // Standard deviation of the first slice's topic natural parameters.
  double initial_topic_scale = 2.0;
  int first_year = 2000;
};

struct SyntheticCorpus {
  ingest::TimeSlicedCorpus corpus;
  FittedModel truth;
};

// Samples a corpus from the dynamic model:
//   beta_{k,0} ~ N(0, scale^2 I),  beta_{k,t} | beta_{k,t-1} ~ N(beta_{k,t-1}, sigma2 I)
//   alpha_0 = alpha0,               alpha_t | alpha_{t-1} ~ N(alpha_{t-1}, delta2 I)
//   eta_d ~ N(alpha_t, a2 I), z ~ Categorical(softmax(eta_d)), w ~ Categorical(softmax(beta_{z,t}))
// Zero variances are allowed here (degenerate chains). Slices are one year
// apart starting at options.first_year; words are named w0000, w0001, ...
SyntheticCorpus generate_dtm_corpus(const Hyperparams& hyper, std::size_t vocab_size,
                                    std::size_t num_slices, std::size_t docs_per_slice,
                                    std::size_t words_per_doc, Rng& rng,
                                    const DtmGeneratorOptions& options = {});

}  // namespace topictrend::model
