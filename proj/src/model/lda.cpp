#include "topictrend/model/lda.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "topictrend/error.hpp"
#include "topictrend/model/parallel.hpp"

namespace topictrend::model {

namespace {

constexpr double kProbFloor = 1e-12;

using boost::math::digamma;
using boost::math::lgamma;

// Seeds topics from documents picked with probability proportional to the
// squared cosine distance to the nearest already-picked document.
std::vector<double> seed_topics(std::span<const ingest::SparseDocument> docs, std::size_t V,
                                std::size_t K, std::mt19937_64& rng) {
  const std::size_t M = docs.size();
  std::vector<double> norms(M, 0.0);
  for (std::size_t d = 0; d < M; ++d) {
    for (const auto& [w, c] : docs[d].counts) norms[d] += static_cast<double>(c) * c;
    norms[d] = std::sqrt(norms[d]);
  }
  auto cosine = [&](std::size_t a, std::size_t b) {
    if (norms[a] == 0 || norms[b] == 0) return 0.0;
    const auto& x = docs[a].counts;
    const auto& y = docs[b].counts;
    double dot = 0.0;
    for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
      if (x[i].first == y[j].first) {
        dot += static_cast<double>(x[i].second) * y[j].second;
        ++i;
        ++j;
      } else if (x[i].first < y[j].first) {
        ++i;
      } else {
        ++j;
      }
    }
    return dot / (norms[a] * norms[b]);
  };

  std::vector<std::size_t> picks;
  std::vector<double> nearest(M, 1.0);
  std::uniform_int_distribution<std::size_t> uniform(0, M - 1);
  picks.push_back(uniform(rng));
  while (picks.size() < K) {
    const std::size_t last = picks.back();
    double total = 0.0;
    for (std::size_t d = 0; d < M; ++d) {
      const double dist = 1.0 - cosine(d, last);
      nearest[d] = std::min(nearest[d], dist * dist);
      total += nearest[d];
    }
    if (total <= 0.0) {
      picks.push_back(uniform(rng));
    } else {
      std::discrete_distribution<std::size_t> pick(nearest.begin(), nearest.end());
      picks.push_back(pick(rng));
    }
  }

  std::vector<double> beta(K * V, 1.0 / static_cast<double>(V));
  std::uniform_real_distribution<double> jitter(0.0, 1.0 / static_cast<double>(V));
  for (std::size_t k = 0; k < K; ++k) {
    double total = 0.0;
    for (std::size_t v = 0; v < V; ++v) {
      beta[k * V + v] += jitter(rng);
    }
    for (const auto& [w, c] : docs[picks[k]].counts) beta[k * V + w] += c;
    for (std::size_t v = 0; v < V; ++v) total += beta[k * V + v];
    for (std::size_t v = 0; v < V; ++v) beta[k * V + v] /= total;
  }
  return beta;
}

// phi[i][k] proportional to beta[k][w_i] * exp(digamma(gamma_k)).
void update_phi(const ingest::SparseDocument& doc, std::span<const double> log_beta, std::size_t V,
                std::span<const double> gamma, std::vector<double>& phi) {
  const std::size_t K = gamma.size();
  phi.resize(doc.counts.size() * K);
  std::vector<double> dig(K);
  for (std::size_t k = 0; k < K; ++k) dig[k] = digamma(gamma[k]);
  for (std::size_t i = 0; i < doc.counts.size(); ++i) {
    const auto w = doc.counts[i].first;
    double* row = phi.data() + i * K;
    double m = -INFINITY;
    for (std::size_t k = 0; k < K; ++k) {
      row[k] = log_beta[k * V + w] + dig[k];
      m = std::max(m, row[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      row[k] = std::exp(row[k] - m);
      total += row[k];
    }
    for (std::size_t k = 0; k < K; ++k) row[k] /= total;
  }
}

void estep_document(const ingest::SparseDocument& doc, std::span<const double> log_beta, std::size_t V,
                    double alpha, std::span<double> gamma, const LdaOptions& options) {
  const std::size_t K = gamma.size();
  std::vector<double> phi;
  std::vector<double> next(K);
  for (int iter = 0; iter < options.estep_max_iters; ++iter) {
    update_phi(doc, log_beta, V, gamma, phi);
    std::fill(next.begin(), next.end(), alpha);
    for (std::size_t i = 0; i < doc.counts.size(); ++i) {
      const double n = doc.counts[i].second;
      for (std::size_t k = 0; k < K; ++k) next[k] += n * phi[i * K + k];
    }
    double change = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      change = std::max(change, std::abs(next[k] - gamma[k]) / std::max(1.0, gamma[k]));
      gamma[k] = next[k];
    }
    if (change < options.estep_tolerance) break;
  }
}

double document_bound(const ingest::SparseDocument& doc, std::span<const double> log_beta, std::size_t V,
                      double alpha, std::span<const double> gamma, const std::vector<double>& phi) {
  const std::size_t K = gamma.size();
  double gamma_sum = 0.0;
  for (double g : gamma) gamma_sum += g;
  const double dig_sum = digamma(gamma_sum);
  std::vector<double> elog(K);
  for (std::size_t k = 0; k < K; ++k) elog[k] = digamma(gamma[k]) - dig_sum;

  double bound = lgamma(K * alpha) - K * lgamma(alpha) - lgamma(gamma_sum);
  for (std::size_t k = 0; k < K; ++k) {
    bound += (alpha - 1.0) * elog[k] + lgamma(gamma[k]) - (gamma[k] - 1.0) * elog[k];
  }
  for (std::size_t i = 0; i < doc.counts.size(); ++i) {
    const auto [w, c] = doc.counts[i];
    for (std::size_t k = 0; k < K; ++k) {
      const double p = phi[i * K + k];
      if (p <= 0.0) continue;
      bound += c * p * (elog[k] + log_beta[k * V + w] - std::log(p));
    }
  }
  return bound;
}

}  // namespace

LdaResult fit_lda(std::span<const ingest::SparseDocument> docs, std::size_t vocab_size,
                  std::size_t num_topics, double alpha, std::uint64_t seed, const LdaOptions& options) {
  std::size_t tokens = 0;
  for (const auto& d : docs) {
    for (const auto& [w, c] : d.counts) {
      if (w >= vocab_size) throw numerical_error("DimensionMismatch", "word id outside vocabulary");
      tokens += c;
    }
  }
  if (docs.empty() || tokens == 0) throw data_error("EmptySlice", "no tokens to fit");
  if (num_topics < 1) throw usage_error("InvalidArgument", "K must be >= 1");
  if (!(alpha > 0.0)) throw usage_error("InvalidArgument", "alpha must be > 0");

  const std::size_t K = num_topics;
  const std::size_t V = vocab_size;
  const std::size_t M = docs.size();
  std::mt19937_64 rng(seed);

  LdaResult result;
  result.num_topics = K;
  result.vocab_size = V;
  result.topic_word = seed_topics(docs, V, K, rng);
  result.gamma.resize(M * K);
  for (std::size_t d = 0; d < M; ++d) {
    const double init = alpha + static_cast<double>(docs[d].length()) / static_cast<double>(K);
    std::fill_n(result.gamma.begin() + d * K, K, init);
  }

  std::vector<double> log_beta(K * V);
  std::vector<double> suff(K * V);
  std::vector<double> phi;
  double previous = 0.0;
  for (int iter = 0; iter < options.max_em_iters; ++iter) {
    for (std::size_t i = 0; i < K * V; ++i) log_beta[i] = std::log(std::max(result.topic_word[i], kProbFloor));

    parallel_for(M, options.workers, [&](std::size_t d) {
      estep_document(docs[d], log_beta, V, alpha, {result.gamma.data() + d * K, K}, options);
    });

    std::fill(suff.begin(), suff.end(), 0.0);
    double bound = 0.0;
    for (std::size_t d = 0; d < M; ++d) {
      const std::span<const double> gamma(result.gamma.data() + d * K, K);
      update_phi(docs[d], log_beta, V, gamma, phi);
      bound += document_bound(docs[d], log_beta, V, alpha, gamma, phi);
      for (std::size_t i = 0; i < docs[d].counts.size(); ++i) {
        const auto [w, c] = docs[d].counts[i];
        for (std::size_t k = 0; k < K; ++k) suff[k * V + w] += c * phi[i * K + k];
      }
    }
    result.bound_history.push_back(bound);
    result.iterations = iter + 1;
    if (iter > 0 && std::abs(bound - previous) <= options.em_tolerance * std::abs(previous)) {
      result.converged = true;
      break;
    }
    previous = bound;

    for (std::size_t k = 0; k < K; ++k) {
      double total = 0.0;
      for (std::size_t v = 0; v < V; ++v) total += suff[k * V + v];
      for (std::size_t v = 0; v < V; ++v) {
        result.topic_word[k * V + v] = total > 0.0 ? suff[k * V + v] / total : 1.0 / static_cast<double>(V);
      }
    }
  }

  result.doc_theta.resize(M * K);
  for (std::size_t d = 0; d < M; ++d) {
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) total += result.gamma[d * K + k];
    for (std::size_t k = 0; k < K; ++k) result.doc_theta[d * K + k] = result.gamma[d * K + k] / total;
  }
  return result;
}

FittedModel model_from_lda(const LdaResult& lda, const ingest::TimeSlicedCorpus& corpus,
                           const Hyperparams& hyper) {
  const std::size_t K = lda.num_topics;
  const std::size_t V = lda.vocab_size;
  const std::size_t T = corpus.slices.size();
  if (V != corpus.vocabulary.size() || corpus.num_documents() * K != lda.doc_theta.size()) {
    throw numerical_error("DimensionMismatch", "LDA result does not match the corpus");
  }
  FittedModel model;
  model.hyper = hyper;
  model.hyper.num_topics = static_cast<int>(K);
  model.vocabulary = corpus.vocabulary.words();
  for (const auto& s : corpus.slices) model.periods.push_back({s.label, s.start_year, s.end_year});
  model.topic_natural.resize(K * T * V);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t t = 0; t < T; ++t) {
      auto row = model.natural(k, t);
      for (std::size_t v = 0; v < V; ++v) row[v] = std::log(std::max(lda.topic_word[k * V + v], kProbFloor));
    }
  }
  model.topic_variance.assign(T, 0.0);
  model.alpha_mean.assign(T * K, 0.0);
  model.alpha_variance.assign(T * K, 0.0);
  std::size_t d = 0;
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& doc : corpus.slices[t].docs) {
      DocumentTopics topics;
      topics.id = doc.id;
      topics.year = doc.year;
      topics.slice = t;
      topics.theta.assign(lda.theta(d).begin(), lda.theta(d).end());
      for (double p : topics.theta) topics.eta.push_back(std::log(std::max(p, kProbFloor)));
      topics.eta_var.assign(K, 0.0);
      model.documents.push_back(std::move(topics));
      ++d;
    }
  }
  model.train_log.iterations = lda.iterations;
  model.train_log.bound_history = lda.bound_history;
  model.train_log.final_bound = lda.bound_history.empty() ? 0.0 : lda.bound_history.back();
  model.train_log.converged = lda.converged;
  return model;
}

}  // namespace topictrend::model
