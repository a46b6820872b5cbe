#include "topictrend/model/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "topictrend/error.hpp"
#include "topictrend/model/dtm.hpp"

namespace topictrend::model {

double log_perplexity(const FittedModel& model, const ingest::TimeSlicedCorpus& heldout) {
  std::unordered_map<std::string, ingest::WordId> index;
  for (std::size_t v = 0; v < model.vocabulary.size(); ++v) index.emplace(model.vocabulary[v], v);
  std::vector<ingest::WordId> remap(heldout.vocabulary.size());
  for (std::size_t v = 0; v < remap.size(); ++v) {
    auto it = index.find(heldout.vocabulary.word(static_cast<ingest::WordId>(v)));
    if (it == index.end()) {
      throw data_error("VocabularyMismatch",
                       "held-out word '" + heldout.vocabulary.word(static_cast<ingest::WordId>(v)) +
                           "' is not in the model vocabulary");
    }
    remap[v] = it->second;
  }

  const std::size_t K = model.num_topics();
  const std::size_t T = model.num_slices();
  std::vector<std::vector<double>> topics(K * T);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t t = 0; t < T; ++t) topics[k * T + t] = model.topic_distribution(k, t);
  }

  double log_lik = 0.0;
  double tokens = 0.0;
  for (const auto& slice : heldout.slices) {
    for (const auto& doc : slice.docs) {
      ingest::SparseDocument mapped;
      mapped.id = doc.id;
      mapped.year = doc.year;
      for (const auto& [w, c] : doc.counts) mapped.counts.emplace_back(remap[w], c);
      std::sort(mapped.counts.begin(), mapped.counts.end());
      const std::size_t t = slice_for_year(model, doc.year);
      const auto theta = infer_document(model, mapped, t).theta;
      for (const auto& [w, c] : mapped.counts) {
        double p = 0.0;
        for (std::size_t k = 0; k < K; ++k) p += theta[k] * topics[k * T + t][w];
        log_lik += c * std::log(std::max(p, 1e-12));
        tokens += c;
      }
    }
  }
  if (tokens == 0.0) throw data_error("EmptyCorpus", "held-out corpus has no tokens");
  return -log_lik / tokens;
}

std::vector<std::size_t> top_words(const std::vector<double>& distribution, std::size_t top_n) {
  std::vector<std::size_t> order(distribution.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t n = std::min(top_n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (distribution[a] != distribution[b]) return distribution[a] > distribution[b];
                      return a < b;
                    });
  order.resize(n);
  return order;
}

CoherenceResult topic_coherence(const FittedModel& model, const ingest::TimeSlicedCorpus& corpus,
                                std::size_t top_n) {
  if (top_n < 2) throw usage_error("InvalidArgument", "top_n must be >= 2");
  std::unordered_map<std::string, ingest::WordId> corpus_index;
  for (std::size_t v = 0; v < corpus.vocabulary.size(); ++v) {
    corpus_index.emplace(corpus.vocabulary.word(static_cast<ingest::WordId>(v)), v);
  }
  // Sorted document lists for each corpus word.
  std::vector<std::vector<std::uint32_t>> postings(corpus.vocabulary.size());
  std::uint32_t doc_no = 0;
  for (const auto& slice : corpus.slices) {
    for (const auto& doc : slice.docs) {
      for (const auto& [w, c] : doc.counts) postings[w].push_back(doc_no);
      ++doc_no;
    }
  }
  const std::vector<std::uint32_t> none;
  auto docs_of = [&](std::size_t model_word) -> const std::vector<std::uint32_t>& {
    auto it = corpus_index.find(model.vocabulary[model_word]);
    return it == corpus_index.end() ? none : postings[it->second];
  };

  CoherenceResult result;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    const auto top = top_words(model.time_averaged_distribution(k), top_n);
    double score = 0.0;
    for (std::size_t i = 1; i < top.size(); ++i) {
      const auto& di = docs_of(top[i]);
      for (std::size_t j = 0; j < i; ++j) {
        const auto& dj = docs_of(top[j]);
        std::size_t both = 0;
        for (std::size_t a = 0, b = 0; a < di.size() && b < dj.size();) {
          if (di[a] == dj[b]) {
            ++both;
            ++a;
            ++b;
          } else if (di[a] < dj[b]) {
            ++a;
          } else {
            ++b;
          }
        }
        const double dwj = std::max<double>(1.0, static_cast<double>(dj.size()));
        score += std::log((static_cast<double>(both) + 1.0) / dwj);
      }
    }
    result.per_topic.push_back(score);
  }
  if (!result.per_topic.empty()) {
    result.average = std::accumulate(result.per_topic.begin(), result.per_topic.end(), 0.0) /
                     static_cast<double>(result.per_topic.size());
  }
  return result;
}

}  // namespace topictrend::model
