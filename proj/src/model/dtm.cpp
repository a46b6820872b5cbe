#include "topictrend/model/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "topictrend/error.hpp"
#include "topictrend/model/lbfgs.hpp"
#include "topictrend/model/lda.hpp"
#include "topictrend/model/parallel.hpp"
#include "topictrend/model/softmax.hpp"
#include "topictrend/model/state_space.hpp"

namespace topictrend::model {

namespace {

constexpr double kProbFloor = 1e-12;
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Root of a decreasing function g on [lo, hi] with g(lo) >= 0 >= g(hi).
// `g` returns (value, derivative). Newton steps, bisection when they leave
// the bracket.
template <typename G>
double solve_decreasing(G&& g, double lo, double hi, double x) {
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const auto [f, df] = g(x);
    if (f == 0.0) return x;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - f / df;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-12 * (1.0 + std::abs(x)) || hi - lo <= 1e-13 * (1.0 + std::abs(x))) break;
  }
  return x;
}

// Prior and topic quantities a document sees in its slice.
struct SliceContext {
  std::span<const double> elog;         // [topic][word]: E[log p(word | topic)] lower bound
  std::size_t vocab_size = 0;
  std::span<const double> alpha_mean;   // [topic]
  std::span<const double> alpha_var;    // [topic]
  double a2 = 1.0;
};

struct DocState {
  std::vector<double> lambda;
  std::vector<double> nu2;
};

double log_zeta(const DocState& s) {
  double m = -INFINITY;
  for (std::size_t k = 0; k < s.lambda.size(); ++k) m = std::max(m, s.lambda[k] + 0.5 * s.nu2[k]);
  double total = 0.0;
  for (std::size_t k = 0; k < s.lambda.size(); ++k) total += std::exp(s.lambda[k] + 0.5 * s.nu2[k] - m);
  return m + std::log(total);
}

// Responsibilities phi[i][k] for the distinct words of `doc`.
void compute_phi(const ingest::SparseDocument& doc, const SliceContext& ctx, const DocState& s,
                 std::vector<double>& phi) {
  const std::size_t K = s.lambda.size();
  phi.resize(doc.counts.size() * K);
  for (std::size_t i = 0; i < doc.counts.size(); ++i) {
    const auto w = doc.counts[i].first;
    double* row = phi.data() + i * K;
    double m = -INFINITY;
    for (std::size_t k = 0; k < K; ++k) {
      row[k] = ctx.elog[k * ctx.vocab_size + w] + s.lambda[k];
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

// Per-document bound with phi and zeta at their closed-form optima.
double document_bound(const ingest::SparseDocument& doc, const SliceContext& ctx, const DocState& s) {
  const std::size_t K = s.lambda.size();
  double bound = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double d = s.lambda[k] - ctx.alpha_mean[k];
    bound += -0.5 * (kLog2Pi + std::log(ctx.a2)) - (d * d + s.nu2[k] + ctx.alpha_var[k]) / (2.0 * ctx.a2);
    bound += 0.5 * (kLog2Pi + 1.0 + std::log(s.nu2[k]));
  }
  std::vector<double> terms(K);
  for (const auto& [w, c] : doc.counts) {
    for (std::size_t k = 0; k < K; ++k) terms[k] = ctx.elog[k * ctx.vocab_size + w] + s.lambda[k];
    bound += c * log_sum_exp(terms);
  }
  bound -= static_cast<double>(doc.length()) * log_zeta(s);
  return bound;
}

// Coordinate ascent on one document's variational parameters.
void update_document(const ingest::SparseDocument& doc, const SliceContext& ctx, DocState& s,
                     int max_iters, double tolerance) {
  const std::size_t K = s.lambda.size();
  const double N = static_cast<double>(doc.length());
  const double a2 = ctx.a2;
  std::vector<double> phi;
  std::vector<double> c(K);
  for (int iter = 0; iter < max_iters; ++iter) {
    compute_phi(doc, ctx, s, phi);
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < doc.counts.size(); ++i) {
      for (std::size_t k = 0; k < K; ++k) c[k] += doc.counts[i].second * phi[i * K + k];
    }
    double change = 0.0;

    double lz = log_zeta(s);
    for (std::size_t k = 0; k < K; ++k) {
      const double m = ctx.alpha_mean[k];
      const double b = 0.5 * s.nu2[k] - lz;  // log of (1/zeta) e^{nu2/2}
      auto g = [&](double x) {
        const double e = N * std::exp(x + b);
        return std::pair{-(x - m) / a2 + c[k] - e, -1.0 / a2 - e};
      };
      const double hi = m + a2 * c[k];
      double lo = std::min(s.lambda[k], hi) - 1.0;
      for (double width = 1.0; g(lo).first < 0.0; width *= 2.0) lo -= width;
      const double x = solve_decreasing(g, lo, hi, s.lambda[k]);
      change = std::max(change, std::abs(x - s.lambda[k]));
      s.lambda[k] = x;
    }

    lz = log_zeta(s);
    for (std::size_t k = 0; k < K; ++k) {
      // Stationary point in u = log(nu2).
      const double b = s.lambda[k] - lz;
      auto g = [&](double u) {
        const double v = std::exp(u);
        const double e = 0.5 * N * std::exp(b + 0.5 * v);
        return std::pair{-0.5 / a2 - e + 0.5 / v, -0.5 * v * e - 0.5 / v};
      };
      const double hi = std::log(a2);
      double u = hi;
      if (g(hi).first < 0.0) {
        double lo = hi - 1.0;
        for (double width = 1.0; g(lo).first < 0.0; width *= 2.0) lo -= width;
        u = solve_decreasing(g, lo, hi, std::log(s.nu2[k]));
      }
      const double v = std::exp(u);
      change = std::max(change, std::abs(v - s.nu2[k]));
      s.nu2[k] = v;
    }
    if (change < tolerance) break;
  }
}

// elog[k][v] = s_kv - S/2 - log sum_v exp(s_kv) for one slice.
void slice_elog(std::span<const double> natural_kt, double variance, std::span<double> out) {
  const double lse = log_sum_exp(natural_kt);
  for (std::size_t v = 0; v < natural_kt.size(); ++v) out[v] = natural_kt[v] - 0.5 * variance - lse;
}

struct TopicStats {
  std::vector<double> word;   // [t][v]
  std::vector<double> total;  // [t]
};

class DtmFitter {
 public:
  DtmFitter(const ingest::TimeSlicedCorpus& corpus, const Hyperparams& hyper, const DtmOptions& options)
      : corpus_(corpus), hyper_(hyper), options_(options) {
    K_ = static_cast<std::size_t>(hyper.num_topics);
    T_ = corpus.slices.size();
    V_ = corpus.vocabulary.size();
    for (std::size_t t = 0; t < T_; ++t) {
      for (const auto& d : corpus.slices[t].docs) {
        docs_.push_back(&d);
        doc_slice_.push_back(t);
      }
    }
    const std::vector<double> obs(T_, options.obs_variance);
    beta_gains_ = chain_gains(options.initial_variance, hyper.sigma2, obs);
  }

  FittedModel run() {
    initialize();
    TrainLog log;
    double previous = 0.0;
    for (int iter = 0; iter < options_.max_iters; ++iter) {
      compute_elog();
      estep();
      const auto stats = sufficient_stats();
      update_alpha();
      mstep(stats);
      compute_elog();
      const double bound = total_bound();
      if (!std::isfinite(bound)) throw numerical_error("NonFiniteBound", "variational bound is not finite");
      log.bound_history.push_back(bound);
      log.iterations = iter + 1;
      if (iter > 0) {
        const double rel = std::abs(bound - previous) / std::max(std::abs(previous), 1e-300);
        log.relative_changes.push_back(rel);
        if (rel < options_.tolerance) {
          log.converged = true;
          break;
        }
      }
      previous = bound;
    }
    log.final_bound = log.bound_history.empty() ? 0.0 : log.bound_history.back();
    return finish(std::move(log));
  }

 private:
  void initialize() {
    std::vector<ingest::SparseDocument> pooled;
    pooled.reserve(docs_.size());
    for (const auto* d : docs_) pooled.push_back(*d);
    LdaOptions lda_options;
    lda_options.max_em_iters = options_.init_lda_iters;
    lda_options.workers = options_.workers;
    const auto lda = fit_lda(pooled, V_, K_, options_.init_lda_alpha, hyper_.seed, lda_options);

    std::mt19937_64 rng(hyper_.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> noise(0.0, options_.init_noise);
    y_.assign(K_ * T_ * V_, 0.0);
    s_.assign(K_ * T_ * V_, 0.0);
    for (std::size_t k = 0; k < K_; ++k) {
      std::vector<double> logb(V_);
      double mean = 0.0;
      for (std::size_t v = 0; v < V_; ++v) {
        logb[v] = std::log(std::max(lda.topic(k)[v], kProbFloor));
        mean += logb[v] / static_cast<double>(V_);
      }
      for (std::size_t t = 0; t < T_; ++t) {
        for (std::size_t v = 0; v < V_; ++v) y_[(k * T_ + t) * V_ + v] = logb[v] - mean + noise(rng);
      }
      smooth_topic(k);
    }

    states_.resize(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      auto& s = states_[d];
      s.lambda.resize(K_);
      s.nu2.assign(K_, hyper_.a2);
      for (std::size_t k = 0; k < K_; ++k) s.lambda[k] = std::log(std::max(lda.theta(d)[k], kProbFloor));
    }
    update_alpha();
  }

  void smooth_topic(std::size_t k) {
    std::vector<double> obs(T_), means(T_);
    for (std::size_t v = 0; v < V_; ++v) {
      for (std::size_t t = 0; t < T_; ++t) obs[t] = y_[(k * T_ + t) * V_ + v];
      smooth_means(beta_gains_, 0.0, obs, means);
      for (std::size_t t = 0; t < T_; ++t) s_[(k * T_ + t) * V_ + v] = means[t];
    }
  }

  // elog_ layout [t][k][v] so each slice is one contiguous block.
  void compute_elog() {
    elog_.resize(T_ * K_ * V_);
    for (std::size_t t = 0; t < T_; ++t) {
      for (std::size_t k = 0; k < K_; ++k) {
        slice_elog({s_.data() + (k * T_ + t) * V_, V_}, beta_gains_.smoothed[t],
                   {elog_.data() + (t * K_ + k) * V_, V_});
      }
    }
  }

  SliceContext context(std::size_t t) const {
    return {{elog_.data() + t * K_ * V_, K_ * V_}, V_, {alpha_mean_.data() + t * K_, K_},
            {alpha_var_.data() + t * K_, K_}, hyper_.a2};
  }

  void estep() {
    parallel_for(docs_.size(), options_.workers, [&](std::size_t d) {
      update_document(*docs_[d], context(doc_slice_[d]), states_[d], options_.estep_max_iters,
                      options_.estep_tolerance);
    });
  }

  std::vector<TopicStats> sufficient_stats() const {
    std::vector<TopicStats> stats(K_);
    for (auto& s : stats) {
      s.word.assign(T_ * V_, 0.0);
      s.total.assign(T_, 0.0);
    }
    std::vector<double> phi;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      const std::size_t t = doc_slice_[d];
      compute_phi(*docs_[d], context(t), states_[d], phi);
      for (std::size_t i = 0; i < docs_[d]->counts.size(); ++i) {
        const auto [w, c] = docs_[d]->counts[i];
        for (std::size_t k = 0; k < K_; ++k) {
          const double x = c * phi[i * K_ + k];
          stats[k].word[t * V_ + w] += x;
          stats[k].total[t] += x;
        }
      }
    }
    return stats;
  }

  // Exact update of the proportion chains given the document means.
  void update_alpha() {
    std::vector<double> obs_var(T_);
    std::vector<std::vector<double>> obs(K_, std::vector<double>(T_, 0.0));
    std::vector<std::size_t> n(T_, 0);
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      ++n[doc_slice_[d]];
      for (std::size_t k = 0; k < K_; ++k) obs[k][doc_slice_[d]] += states_[d].lambda[k];
    }
    for (std::size_t t = 0; t < T_; ++t) {
      obs_var[t] = n[t] > 0 ? hyper_.a2 / static_cast<double>(n[t]) : 1e12;
      for (std::size_t k = 0; k < K_; ++k) obs[k][t] = n[t] > 0 ? obs[k][t] / static_cast<double>(n[t]) : 0.0;
    }
    alpha_gains_ = chain_gains(options_.initial_variance, hyper_.delta2, obs_var);
    const auto alpha0 = hyper_.alpha0_vector();
    alpha_mean_.assign(T_ * K_, 0.0);
    alpha_var_.assign(T_ * K_, 0.0);
    std::vector<double> means(T_);
    for (std::size_t k = 0; k < K_; ++k) {
      smooth_means(alpha_gains_, alpha0[k], obs[k], means);
      for (std::size_t t = 0; t < T_; ++t) {
        alpha_mean_[t * K_ + k] = means[t];
        alpha_var_[t * K_ + k] = alpha_gains_.smoothed[t];
      }
    }
  }

  // Maximizes the topic-chain part of the bound over the pseudo-observations.
  void mstep(const std::vector<TopicStats>& stats) {
    parallel_for(K_, options_.workers, [&](std::size_t k) { mstep_topic(k, stats[k]); });
  }

  void mstep_topic(std::size_t k, const TopicStats& st) {
    const double v0 = options_.initial_variance;
    const double sigma2 = hyper_.sigma2;
    std::vector<double> s(T_ * V_), gs(T_ * V_), chain(T_), out(T_), probs(V_);
    auto objective = [&](std::span<const double> y, std::span<double> grad) {
      for (std::size_t v = 0; v < V_; ++v) {
        for (std::size_t t = 0; t < T_; ++t) chain[t] = y[t * V_ + v];
        smooth_means(beta_gains_, 0.0, chain, out);
        for (std::size_t t = 0; t < T_; ++t) s[t * V_ + v] = out[t];
      }
      double ell = 0.0;
      for (std::size_t t = 0; t < T_; ++t) {
        std::span<const double> row(s.data() + t * V_, V_);
        const double lse = log_sum_exp(row);
        ell -= st.total[t] * lse;
        for (std::size_t v = 0; v < V_; ++v) {
          const double x = row[v];
          ell += st.word[t * V_ + v] * x;
          double g = st.word[t * V_ + v] - st.total[t] * std::exp(x - lse);
          if (t == 0) {
            ell -= x * x / (2.0 * v0);
            g -= x / v0;
          } else {
            const double diff = x - s[(t - 1) * V_ + v];
            ell -= diff * diff / (2.0 * sigma2);
            g -= diff / sigma2;
          }
          if (t + 1 < T_) g += (s[(t + 1) * V_ + v] - x) / sigma2;
          gs[t * V_ + v] = g;
        }
      }
      for (std::size_t v = 0; v < V_; ++v) {
        for (std::size_t t = 0; t < T_; ++t) chain[t] = gs[t * V_ + v];
        smooth_means_adjoint(beta_gains_, chain, out);
        for (std::size_t t = 0; t < T_; ++t) grad[t * V_ + v] = -out[t];
      }
      return -ell;
    };
    std::vector<double> y(y_.begin() + static_cast<std::ptrdiff_t>(k * T_ * V_),
                          y_.begin() + static_cast<std::ptrdiff_t>((k + 1) * T_ * V_));
    LbfgsOptions lo;
    lo.max_iters = options_.mstep_max_iters;
    lbfgs_minimize(objective, y, lo);
    std::copy(y.begin(), y.end(), y_.begin() + static_cast<std::ptrdiff_t>(k * T_ * V_));
    smooth_topic(k);
  }

  double total_bound() const {
    std::vector<double> per_doc(docs_.size());
    parallel_for(docs_.size(), options_.workers, [&](std::size_t d) {
      per_doc[d] = document_bound(*docs_[d], context(doc_slice_[d]), states_[d]);
    });
    double bound = 0.0;
    for (double b : per_doc) bound += b;

    const auto alpha0 = hyper_.alpha0_vector();
    std::vector<double> chain(T_);
    for (std::size_t k = 0; k < K_; ++k) {
      for (std::size_t t = 0; t < T_; ++t) chain[t] = alpha_mean_[t * K_ + k];
      bound += chain_expected_log_prior(alpha_gains_, chain, alpha0[k], options_.initial_variance, hyper_.delta2);
      bound += chain_entropy(alpha_gains_);
    }
    const double beta_entropy = chain_entropy(beta_gains_);
    for (std::size_t k = 0; k < K_; ++k) {
      for (std::size_t v = 0; v < V_; ++v) {
        for (std::size_t t = 0; t < T_; ++t) chain[t] = s_[(k * T_ + t) * V_ + v];
        bound += chain_expected_log_prior(beta_gains_, chain, 0.0, options_.initial_variance, hyper_.sigma2);
        bound += beta_entropy;
      }
    }
    return bound;
  }

  FittedModel finish(TrainLog log) {
    FittedModel model;
    model.hyper = hyper_;
    model.options = options_;
    model.vocabulary = corpus_.vocabulary.words();
    for (const auto& s : corpus_.slices) model.periods.push_back({s.label, s.start_year, s.end_year});
    model.topic_natural = s_;
    model.topic_variance = beta_gains_.smoothed;
    model.alpha_mean = alpha_mean_;
    model.alpha_variance = alpha_var_;
    model.documents.reserve(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      DocumentTopics dt;
      dt.id = docs_[d]->id;
      dt.year = docs_[d]->year;
      dt.slice = doc_slice_[d];
      dt.eta = states_[d].lambda;
      dt.eta_var = states_[d].nu2;
      dt.theta = softmax(dt.eta);
      model.documents.push_back(std::move(dt));
    }
    model.train_log = std::move(log);
    return model;
  }

  const ingest::TimeSlicedCorpus& corpus_;
  Hyperparams hyper_;
  DtmOptions options_;
  std::size_t K_ = 0, T_ = 0, V_ = 0;
  std::vector<const ingest::SparseDocument*> docs_;
  std::vector<std::size_t> doc_slice_;
  ChainGains beta_gains_;
  ChainGains alpha_gains_;
  std::vector<double> y_;  // [k][t][v] pseudo-observations
  std::vector<double> s_;  // [k][t][v] smoothed means
  std::vector<double> elog_;
  std::vector<double> alpha_mean_;  // [t][k]
  std::vector<double> alpha_var_;
  std::vector<DocState> states_;
};

}  // namespace

FittedModel fit_dtm(const ingest::TimeSlicedCorpus& corpus, const Hyperparams& hyper, const DtmOptions& options) {
  hyper.validate();
  corpus.validate();
  if (corpus.slices.empty() || corpus.vocabulary.empty()) {
    throw numerical_error("DimensionMismatch", "corpus needs at least one slice and a non-empty vocabulary");
  }
  if (hyper.alpha0_vector().size() != static_cast<std::size_t>(hyper.num_topics)) {
    throw numerical_error("DimensionMismatch", "alpha0 must have one entry or K entries");
  }
  if (!(options.obs_variance > 0.0) || !(options.initial_variance > 0.0) || options.max_iters < 1) {
    throw usage_error("InvalidArgument", "fitting options must be positive");
  }
  return DtmFitter(corpus, hyper, options).run();
}

std::size_t slice_for_year(const FittedModel& model, int year) {
  if (model.periods.empty()) throw numerical_error("DimensionMismatch", "model has no periods");
  std::size_t best = 0;
  int best_gap = -1;
  for (std::size_t t = 0; t < model.periods.size(); ++t) {
    const auto& p = model.periods[t];
    const int gap = year < p.start_year ? p.start_year - year : (year > p.end_year ? year - p.end_year : 0);
    if (best_gap < 0 || gap < best_gap) {
      best = t;
      best_gap = gap;
    }
  }
  return best;
}

DocumentTopics infer_document(const FittedModel& model, const ingest::SparseDocument& doc, std::size_t slice) {
  const std::size_t K = model.num_topics();
  const std::size_t V = model.vocab_size();
  if (slice >= model.num_slices()) throw numerical_error("DimensionMismatch", "slice index out of range");
  for (const auto& [w, c] : doc.counts) {
    if (w >= V) throw numerical_error("DimensionMismatch", "word id outside model vocabulary");
  }
  std::vector<double> elog(K * V);
  for (std::size_t k = 0; k < K; ++k) {
    slice_elog(model.natural(k, slice), model.topic_variance[slice], {elog.data() + k * V, V});
  }
  SliceContext ctx{elog, V, model.alpha(slice), {model.alpha_variance.data() + slice * K, K}, model.hyper.a2};
  DocState state;
  state.lambda.assign(ctx.alpha_mean.begin(), ctx.alpha_mean.end());
  state.nu2.assign(K, model.hyper.a2);
  update_document(doc, ctx, state, model.options.estep_max_iters, model.options.estep_tolerance);
  DocumentTopics out;
  out.id = doc.id;
  out.year = doc.year;
  out.slice = slice;
  out.eta = state.lambda;
  out.eta_var = state.nu2;
  out.theta = softmax(out.eta);
  return out;
}

}  // namespace topictrend::model
