#include "topictrend/model/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "topictrend/error.hpp"
#include "topictrend/model/softmax.hpp"

namespace topictrend::model {

std::vector<double> sample_dirichlet(std::span<const double> alpha, Rng& rng) {
  if (alpha.empty()) throw numerical_error("NonPositiveAlpha", "empty alpha");
  std::vector<double> draws(alpha.size());
  double total = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
      throw numerical_error("NonPositiveAlpha", "alpha entries must be positive and finite");
    }
    draws[i] = std::gamma_distribution<double>(alpha[i], 1.0)(rng);
    total += draws[i];
  }
  if (total <= 0.0) {
    // Every gamma draw underflowed; fall back to the most likely vertex.
    std::discrete_distribution<std::size_t> pick(alpha.begin(), alpha.end());
    std::vector<double> vertex(alpha.size(), 0.0);
    vertex[pick(rng)] = 1.0;
    return vertex;
  }
  for (double& x : draws) x /= total;
  return draws;
}

std::vector<ingest::WordId> generate_lda_document(std::span<const double> theta,
                                                  const std::vector<std::vector<double>>& betas,
                                                  std::size_t n_words, Rng& rng) {
  if (theta.size() != betas.size() || betas.empty()) {
    throw numerical_error("DimensionMismatch", "theta has " + std::to_string(theta.size()) +
                                                   " entries but there are " +
                                                   std::to_string(betas.size()) + " topics");
  }
  for (const auto& b : betas) {
    if (b.size() != betas.front().size() || b.empty()) {
      throw numerical_error("DimensionMismatch", "topics have different vocabulary sizes");
    }
  }
  std::discrete_distribution<std::size_t> topic(theta.begin(), theta.end());
  std::vector<std::discrete_distribution<ingest::WordId>> words;
  words.reserve(betas.size());
  for (const auto& b : betas) words.emplace_back(b.begin(), b.end());

  std::vector<ingest::WordId> doc(n_words);
  for (auto& w : doc) w = words[topic(rng)](rng);
  return doc;
}

SyntheticCorpus generate_dtm_corpus(const Hyperparams& hyper, std::size_t vocab_size,
                                    std::size_t num_slices, std::size_t docs_per_slice,
                                    std::size_t words_per_doc, Rng& rng,
                                    const DtmGeneratorOptions& options) {
  const auto K = static_cast<std::size_t>(hyper.num_topics);
  if (K < 1 || vocab_size < 1 || num_slices < 1 || docs_per_slice < 1 || words_per_doc < 1) {
    throw usage_error("InvalidArgument", "generator sizes must all be >= 1");
  }
  if (hyper.sigma2 < 0 || hyper.delta2 < 0 || hyper.a2 < 0) {
    throw usage_error("InvalidArgument", "generator variances must be >= 0");
  }
  const std::size_t V = vocab_size;
  const std::size_t T = num_slices;

  SyntheticCorpus out;
  FittedModel& truth = out.truth;
  truth.hyper = hyper;
  truth.vocabulary.reserve(V);
  for (std::size_t v = 0; v < V; ++v) {
    char name[32];
    std::snprintf(name, sizeof name, "w%04zu", v);
    truth.vocabulary.emplace_back(name);
  }
  for (std::size_t t = 0; t < T; ++t) {
    const int year = options.first_year + static_cast<int>(t);
    truth.periods.push_back({ingest::period_label(year, 1), year, year});
  }
  truth.topic_natural.assign(K * T * V, 0.0);
  truth.topic_variance.assign(T, 0.0);
  truth.alpha_mean.assign(T * K, 0.0);
  truth.alpha_variance.assign(T * K, 0.0);

  std::normal_distribution<double> normal(0.0, 1.0);
  const double topic_step = std::sqrt(hyper.sigma2);
  const double alpha_step = std::sqrt(hyper.delta2);
  const double doc_sd = std::sqrt(hyper.a2);

  for (std::size_t k = 0; k < K; ++k) {
    auto first = truth.natural(k, 0);
    for (double& x : first) x = options.initial_topic_scale * normal(rng);
    for (std::size_t t = 1; t < T; ++t) {
      auto prev = truth.natural(k, t - 1);
      auto cur = truth.natural(k, t);
      for (std::size_t v = 0; v < V; ++v) cur[v] = prev[v] + topic_step * normal(rng);
    }
  }
  const std::vector<double> alpha0 = hyper.alpha0_vector();
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      const double prev = t == 0 ? alpha0[k] : truth.alpha_mean[(t - 1) * K + k];
      truth.alpha_mean[t * K + k] = t == 0 ? prev : prev + alpha_step * normal(rng);
    }
  }

  out.corpus.vocabulary = ingest::Vocabulary(truth.vocabulary);
  out.corpus.rule.first_year = options.first_year;
  out.corpus.rule.bin_years = 1;
  out.corpus.rule.min_df = 1;

  std::vector<std::vector<double>> betas(K);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < K; ++k) betas[k] = truth.topic_distribution(k, t);
    ingest::TimeSlice slice{truth.periods[t].label, truth.periods[t].start_year,
                            truth.periods[t].end_year, {}};
    for (std::size_t d = 0; d < docs_per_slice; ++d) {
      DocumentTopics doc;
      char name[64];
      std::snprintf(name, sizeof name, "t%02zu_d%04zu", t, d);
      doc.id = name;
      doc.year = truth.periods[t].start_year;
      doc.slice = t;
      doc.eta.resize(K);
      doc.eta_var.assign(K, 0.0);
      for (std::size_t k = 0; k < K; ++k) doc.eta[k] = truth.alpha_mean[t * K + k] + doc_sd * normal(rng);
      doc.theta = softmax(doc.eta);

      std::map<ingest::WordId, std::uint32_t> counts;
      for (auto w : generate_lda_document(doc.theta, betas, words_per_doc, rng)) ++counts[w];
      slice.docs.push_back({doc.id, doc.year, {counts.begin(), counts.end()}});
      truth.documents.push_back(std::move(doc));
    }
    out.corpus.slices.push_back(std::move(slice));
  }
  return out;
}

}  // namespace topictrend::model
