#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::model {

// Variational EM for the dynamic topic model.
//
// Each document gets a Gaussian q(eta) = N(lambda, diag(nu2)) and
// multinomial word-topic responsibilities; the log-normalizer of the
// logistic normal is bounded with an auxiliary zeta. The proportion path
// alpha_{.,k} is updated exactly with a Kalman/RTS smoother on per-slice
// mean lambdas. Each topic-word chain is Gaussian with variational
// pseudo-observations that are smoothed forward-backward; the
// pseudo-observations are optimized with L-BFGS. Every step increases the
// bound, which is recorded per iteration in train_log.
//
// Initialized from one LDA fit on the pooled corpus. Throws
// DimensionMismatch for an invalid corpus and InvalidArgument for bad
// hyperparameters. Hitting max_iters leaves train_log.converged false.
FittedModel fit_dtm(const ingest::TimeSlicedCorpus& corpus, const Hyperparams& hyper,
                    const DtmOptions& options = {});

// Infers topic proportions for a document not seen during fitting, using
// slice `slice` of `model` as the prior and topic distributions. Word ids
// index the model vocabulary.
DocumentTopics infer_document(const FittedModel& model, const ingest::SparseDocument& doc,
                              std::size_t slice);

// Index of the model period containing `year`; the nearest period if none does.
std::size_t slice_for_year(const FittedModel& model, int year);

}  // namespace topictrend::model
