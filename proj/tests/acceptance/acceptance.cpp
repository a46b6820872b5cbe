// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit if
// any required criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "topictrend/analysis/assignment.hpp"
#include "topictrend/ingest/preprocess.hpp"
#include "topictrend/ingest/spell.hpp"
#include "topictrend/ingest/tokenize.hpp"
#include "topictrend/ingest/utf8.hpp"
#include "topictrend/model/dtm.hpp"
#include "topictrend/model/lda.hpp"
#include "topictrend/model/matching.hpp"
#include "topictrend/model/metrics.hpp"
#include "topictrend/model/sampling.hpp"
#include "topictrend/pipeline/commands.hpp"
#include "topictrend/pipeline/config.hpp"
#include "topictrend/pipeline/csv.hpp"
#include "topictrend/trend/ols.hpp"
#include "topictrend/trend/student_t.hpp"

using namespace topictrend;
namespace fs = std::filesystem;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

Outcome verdict(bool ok, const std::string& detail) { return {ok ? Status::kPass : Status::kFail, detail}; }

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

// 1. Word frequencies of generated documents approach theta^T B.
Outcome generative_fidelity() {
  const std::vector<double> theta = {0.7, 0.3};
  const std::vector<std::vector<double>> betas = {{0.2, 0.0, 0.8}, {0.0, 1.0, 0.0}};
  model::Rng rng(1);
  std::vector<double> freq(3, 0.0);
  double total = 0.0;
  for (int d = 0; d < 100000; ++d) {
    for (auto w : model::generate_lda_document(theta, betas, 10, rng)) freq[w] += 1.0;
    total += 10.0;
  }
  double worst = 0.0;
  for (std::size_t v = 0; v < 3; ++v) {
    const double expected = theta[0] * betas[0][v] + theta[1] * betas[1][v];
    worst = std::max(worst, std::abs(freq[v] / total - expected));
  }
  return verdict(worst <= 0.01, "freq(c) = " + fmt(freq[2] / total) + " (expected 0.56), max error " + fmt(worst));
}

// 2. Dirichlet(2, 2, 1) sample means.
Outcome dirichlet_sampler() {
  const std::vector<double> alpha = {2.0, 2.0, 1.0};
  const std::vector<double> expected = {0.4, 0.4, 0.2};
  model::Rng rng(2);
  std::vector<double> mean(3, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto th = model::sample_dirichlet(alpha, rng);
    for (std::size_t k = 0; k < 3; ++k) mean[k] += th[k] / n;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::abs(mean[k] - expected[k]));
  return verdict(worst <= 0.01, "means (" + fmt(mean[0]) + ", " + fmt(mean[1]) + ", " + fmt(mean[2]) +
                                    "), max error " + fmt(worst));
}

// 3. Refit a generated DTM corpus and match topics slice by slice.
Outcome dtm_recovery() {
  model::Hyperparams h;
  h.num_topics = 3;
  h.sigma2 = 0.01;
  model::Rng rng(3);
  const auto syn = model::generate_dtm_corpus(h, 30, 5, 200, 60, rng);
  auto fit_h = h;
  fit_h.seed = 11;
  model::DtmOptions opts;
  opts.workers = 1;
  const auto fitted = model::fit_dtm(syn.corpus, fit_h, opts);
  double worst = 1.0;
  for (std::size_t t = 0; t < 5; ++t) {
    std::vector<std::vector<double>> truth, got;
    for (std::size_t k = 0; k < 3; ++k) {
      truth.push_back(syn.truth.topic_distribution(k, t));
      got.push_back(fitted.topic_distribution(k, t));
    }
    for (double c : model::matched_cosines(truth, got)) worst = std::min(worst, c);
  }
  return verdict(worst >= 0.9, "min matched cosine " + fmt(worst, 5) + " over 5 slices, " +
                                   std::to_string(fitted.train_log.iterations) + " EM iterations");
}

// 4. One-topic LDA is the corpus marginal; a one-slice DTM matches LDA.
Outcome degenerate_models() {
  const auto corpus = topictrend::testing::random_corpus(60, 40, 30, 1, 4);
  const auto& docs = corpus.slices[0].docs;
  const auto lda1 = model::fit_lda(docs, corpus.vocabulary.size(), 1, 0.5, 1);
  std::vector<double> marginal(corpus.vocabulary.size(), 0.0);
  for (const auto& d : docs) {
    for (const auto& [w, c] : d.counts) marginal[w] += c;
  }
  double marginal_err = 0.0;
  for (std::size_t v = 0; v < marginal.size(); ++v) {
    marginal_err = std::max(marginal_err, std::abs(lda1.topic(0)[v] - marginal[v] / corpus.num_tokens()));
  }

  model::Hyperparams h;
  h.num_topics = 3;
  h.seed = 4;
  model::Rng rng(41);
  const auto syn = model::generate_dtm_corpus(h, 30, 1, 300, 60, rng);
  const auto dtm = model::fit_dtm(syn.corpus, h);
  // Symmetric Dirichlet matched to the logistic-normal prior with equal means.
  const double alpha = (1.0 - 1.0 / h.num_topics) / h.a2;
  const auto lda = model::fit_lda(syn.corpus.slices[0].docs, syn.corpus.vocabulary.size(), 3, alpha, 4);
  std::vector<std::vector<double>> a, b;
  for (std::size_t k = 0; k < 3; ++k) {
    a.emplace_back(lda.topic(k).begin(), lda.topic(k).end());
    b.push_back(dtm.topic_distribution(k, 0));
  }
  const auto cos = model::matched_cosines(a, b);
  const double worst = *std::min_element(cos.begin(), cos.end());
  return verdict(marginal_err <= 1e-6 && worst >= 0.99,
                 "K=1 marginal error " + fmt(marginal_err, 3) + ", T=1 DTM vs LDA min cosine " + fmt(worst, 5));
}

// Shortest prefix of the sorted column reaching mass * total.
std::vector<std::string> prefix_oracle(const std::vector<std::string>& ids, const std::vector<double>& col,
                                       double mass) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (col[a] != col[b]) return col[a] > col[b];
    return ids[a] < ids[b];
  });
  const double total = std::accumulate(col.begin(), col.end(), 0.0);
  std::vector<std::string> out;
  double run = 0.0;
  for (std::size_t i : order) {
    if (run >= mass * total - 1e-12 * total) break;
    out.push_back(ids[i]);
    run += col[i];
  }
  return out;
}

// 5. Assignment agrees with the prefix oracle; coverage and minimality hold.
Outcome assignment_oracle() {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(0.3, 1.0);
  std::size_t checks = 0, failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t M = 1 + rng() % 50;
    const std::size_t K = 2 + rng() % 9;
    model::FittedModel m;
    m.hyper.num_topics = static_cast<int>(K);
    std::vector<std::string> ids;
    for (std::size_t d = 0; d < M; ++d) {
      model::DocumentTopics doc;
      doc.id = "d" + std::to_string(1000 + d);
      doc.theta.resize(K);
      double s = 0.0;
      for (auto& x : doc.theta) s += (x = g(rng) + 1e-9);
      for (auto& x : doc.theta) x /= s;
      ids.push_back(doc.id);
      m.documents.push_back(doc);
    }
    for (double mass : {0.3, 0.5, 0.9}) {
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<double> col;
        for (const auto& d : m.documents) col.push_back(d.theta[k]);
        const auto a = analysis::assign_documents(m, k, mass);
        std::vector<std::string> got;
        double covered = 0.0;
        for (const auto& [id, p] : a.docs) {
          got.push_back(id);
          covered += p;
        }
        const double total = std::accumulate(col.begin(), col.end(), 0.0);
        const double target = mass * total - 1e-12 * total;
        const bool coverage = covered >= target;
        const bool minimal = a.docs.empty() || covered - a.docs.back().second < target;
        ++checks;
        if (got != prefix_oracle(ids, col, mass) || !coverage || !minimal) ++failures;
      }
    }
  }
  return verdict(failures == 0, std::to_string(checks) + " topic columns, " + std::to_string(failures) + " mismatches");
}

double quadrature_cdf(double t, int df) {
  const double nu = df;
  const double log_c = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * M_PI);
  auto pdf = [&](double x) { return std::exp(log_c - (nu + 1) / 2 * std::log1p(x * x / nu)); };
  const int n = 50000;
  const double a = std::abs(t);
  const double h = a / n;
  double s = pdf(0) + pdf(a);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
  const double half = s * h / 3.0;
  return t >= 0 ? 0.5 + half : 0.5 - half;
}

// 6. t distribution, the r = 0.20 series and a flat series.
Outcome statistics_oracles() {
  double cdf_err = 0.0;
  for (int df : {1, 2, 10, 38, 100}) {
    for (int i = -20; i <= 20; ++i) {
      const double t = 0.25 * i;
      cdf_err = std::max(cdf_err, std::abs(trend::student_t_cdf(t, df) - quadrature_cdf(t, df)));
    }
  }
  // Forty yearly points with sample correlation exactly 0.20.
  const std::size_t n = 40;
  const double r = 0.20;
  std::vector<double> x(n), zx(n), zp(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1984.0 + static_cast<double>(i);
    zx[i] = static_cast<double>(i) - 19.5;
    zp[i] = std::cos(0.7 * static_cast<double>(i)) + 0.3 * std::sin(2.1 * static_cast<double>(i));
  }
  auto center_normalize = [](std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (auto& a : v) a -= m;
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (auto& a : v) a /= norm;
  };
  center_normalize(zx);
  center_normalize(zp);
  const double proj = std::inner_product(zp.begin(), zp.end(), zx.begin(), 0.0);
  for (std::size_t i = 0; i < n; ++i) zp[i] -= proj * zx[i];
  center_normalize(zp);
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.25 + 0.1 * (r * zx[i] + std::sqrt(1 - r * r) * zp[i]);
  const auto fit = trend::ols_fit(x, y);
  const double t = r * std::sqrt(38.0) / std::sqrt(1 - r * r);
  const double oracle = quadrature_cdf(t, 38);
  const double p = fit.p_one_sided_less;
  const auto flat = trend::ols_fit(x, std::vector<double>(n, 0.3));
  const bool ok = cdf_err <= 1e-8 && std::abs(p - oracle) <= 1e-8 && std::abs(p - 0.8885) <= 0.01 &&
                  flat.p_one_sided_less == 0.5;
  return verdict(ok, "cdf max error " + fmt(cdf_err, 3) + ", p = " + fmt(p, 6) + " (oracle " + fmt(oracle, 6) +
                         "), flat p = " + fmt(flat.p_one_sided_less));
}

// 7. Correction never lowers recognition, protected words survive,
// re-running the pipeline on its own output changes nothing.
Outcome preprocessing_invariants() {
  ingest::DictionarySources src;
  src.frequency_counts = {{"filosofía", 50}, {"mundo", 40}, {"razón", 30}, {"verdad", 20}, {"bien", 25},
                          {"juego", 10},     {"ser", 45},   {"nada", 15},  {"teoría", 35}, {"crítica", 22},
                          {"el", 500},       {"de", 600},   {"la", 550},   {"que", 400},   {"ver", 18}};
  src.stopwords = {"el", "de", "la", "que", "bien", "verdad", "ser"};
  src.protected_words = {"bien", "verdad", "ver"};
  src.lemma_pairs = {{"juegos", "juego"}, {"mundos", "mundo"}, {"verdades", "verdad"}, {"bien", "bueno"},
                     {"teorías", "teoría"}};
  const ingest::DictionaryBundle dicts(src);
  const std::vector<std::string> base = {"filosofía", "mundo",   "razón", "verdad", "bien",    "juego",
                                         "ser",       "nada",    "teoría", "crítica", "el",     "de",
                                         "la",        "que",     "ver",    "juegos",  "mundos", "verdades",
                                         "teorías",   "qwertyz", "xyzzyq"};
  std::mt19937_64 rng(7);
  auto mutate = [&](std::string w) {
    auto u = utf8::decode(w);
    if (u.size() > 3) {
      const std::size_t i = rng() % u.size();
      switch (rng() % 3) {
        case 0: u.erase(i, 1); break;
        case 1: u[i] = U'a' + static_cast<char32_t>(rng() % 26); break;
        default: u.insert(i, 1, U'a' + static_cast<char32_t>(rng() % 26)); break;
      }
    }
    return utf8::encode(u);
  };

  std::size_t lowered = 0, lost = 0, unstable = 0;
  const std::set<std::string> protected_words = {"bien", "verdad", "ver"};
  for (int trial = 0; trial < 1000; ++trial) {
    ingest::TokenList tokens;
    const std::size_t len = 1 + rng() % 40;
    for (std::size_t i = 0; i < len; ++i) {
      const auto& w = base[rng() % base.size()];
      tokens.push_back(rng() % 3 == 0 ? mutate(w) : w);
    }
    const auto corrected = ingest::correct_orthography(tokens, dicts);
    if (ingest::recognition_ratio(corrected.tokens, dicts) < ingest::recognition_ratio(tokens, dicts)) ++lowered;

    std::string text;
    for (const auto& t : tokens) text += t + " ";
    const auto once = ingest::preprocess_text("x", 2000, text, dicts);
    std::map<std::string, int> in_count, out_count;
    for (const auto& t : ingest::normalize_and_tokenize(text, 3)) {
      if (protected_words.count(t)) ++in_count[t];
    }
    for (const auto& t : once.clean.tokens) {
      if (protected_words.count(t)) ++out_count[t];
    }
    for (const auto& [w, c] : in_count) {
      if (out_count[w] < c) ++lost;
    }
    std::string again_text;
    for (const auto& t : once.clean.tokens) again_text += t + " ";
    if (ingest::preprocess_text("x", 2000, again_text, dicts).clean.tokens != once.clean.tokens) ++unstable;
  }
  return verdict(lowered == 0 && lost == 0 && unstable == 0,
                 "1000 lists: " + std::to_string(lowered) + " lowered recognition, " + std::to_string(lost) +
                     " lost protected words, " + std::to_string(unstable) + " not idempotent");
}

// 8. Coherence against an independent set-based counter.
Outcome coherence_oracle() {
  model::Hyperparams h;
  h.num_topics = 4;
  model::Rng rng(8);
  const auto syn = model::generate_dtm_corpus(h, 40, 2, 25, 30, rng);
  const auto& corpus = syn.corpus;
  const auto& m = syn.truth;
  const std::size_t top_n = 10;

  std::map<std::string, std::set<std::size_t>> docs_with;
  std::size_t doc_no = 0;
  for (const auto& s : corpus.slices) {
    for (const auto& d : s.docs) {
      for (const auto& [w, c] : d.counts) docs_with[corpus.vocabulary.word(w)].insert(doc_no);
      ++doc_no;
    }
  }
  const auto got = model::topic_coherence(m, corpus, top_n);
  double worst = 0.0;
  for (std::size_t k = 0; k < m.num_topics(); ++k) {
    std::vector<double> avg(m.vocab_size(), 0.0);
    for (std::size_t t = 0; t < m.num_slices(); ++t) {
      const auto p = m.topic_distribution(k, t);
      for (std::size_t v = 0; v < p.size(); ++v) avg[v] += p[v] / static_cast<double>(m.num_slices());
    }
    std::vector<std::size_t> order(avg.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return avg[a] > avg[b]; });
    order.resize(top_n);
    double score = 0.0;
    for (std::size_t i = 1; i < top_n; ++i) {
      const auto& di = docs_with[m.vocabulary[order[i]]];
      for (std::size_t j = 0; j < i; ++j) {
        const auto& dj = docs_with[m.vocabulary[order[j]]];
        std::vector<std::size_t> both;
        std::set_intersection(di.begin(), di.end(), dj.begin(), dj.end(), std::back_inserter(both));
        score += std::log((both.size() + 1.0) / std::max<double>(1.0, static_cast<double>(dj.size())));
      }
    }
    worst = std::max(worst, std::abs(score - got.per_topic[k]));
  }
  return verdict(doc_no == 50 && worst <= 1e-9,
                 std::to_string(doc_no) + " documents, max per-topic difference " + fmt(worst, 3));
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + TOPICTREND_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every file below `dir` except manifests, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
    files[fs::relative(e.path(), dir).generic_string()] = topictrend::testing::read_text(e.path());
  }
  return files;
}

// 9. The CLI pipeline is byte-for-byte reproducible.
Outcome determinism() {
  topictrend::testing::TempDir tmp("acceptance");
  const auto fx = topictrend::testing::write_fixture(tmp.path(), 100, 9);
  const auto log = tmp / "log.txt";
  const std::string base = "--config " + fx.config.string() + " ";
  std::vector<std::map<std::string, std::string>> runs;
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(tmp / "out");
    for (const char* cmd : {"ingest", "train", "assign", "report"}) {
      if (run_cli(base + cmd, log) != 0) {
        return {Status::kFail, std::string(cmd) + " failed: " + topictrend::testing::read_text(log)};
      }
    }
    runs.push_back(snapshot(tmp / "out"));
  }
  std::size_t differing = 0;
  for (const auto& [path, content] : runs[0]) {
    auto it = runs[1].find(path);
    if (it == runs[1].end() || it->second != content) ++differing;
  }
  if (runs[0].size() != runs[1].size()) ++differing;

  if (run_cli(base + "grid", log) != 0) return {Status::kFail, "grid failed: " + topictrend::testing::read_text(log)};
  const auto config = pipeline::PipelineConfig::from_file(pipeline::ConfigFile::load(fx.config), fx.root);
  const auto grid = pipeline::read_csv(tmp / "out" / "grid" / "grid.csv");
  const std::size_t expected_rows = config.grid.k_values.size() * config.grid.seeds.size();
  return verdict(differing == 0 && grid.rows.size() == expected_rows,
                 std::to_string(runs[0].size()) + " output files, " + std::to_string(differing) +
                     " differing; grid rows " + std::to_string(grid.rows.size()) + " of " +
                     std::to_string(expected_rows));
}

// 10. Reports on the archived corpus, when a config for it is supplied.
Outcome external_corpus() {
  const char* path = std::getenv("TOPICTREND_EXTERNAL_CORPUS");
  if (!path || !*path) return {Status::kSkip, "set TOPICTREND_EXTERNAL_CORPUS to a config file to run"};
  const fs::path cfg(path);
  auto config = pipeline::PipelineConfig::from_file(pipeline::ConfigFile::load(cfg), fs::absolute(cfg).parent_path());
  pipeline::CommandOptions opts;
  opts.config_file = cfg;
  pipeline::cmd_ingest(config, opts);
  pipeline::cmd_train(config, opts);
  pipeline::cmd_assign(config, opts);
  pipeline::cmd_report(config, opts);
  const auto out = config.paths.output_dir;
  std::size_t missing = 0;
  for (const char* f : {"fig2_periods.csv", "fig4_area_counts.csv", "fig5_largest_subareas.csv",
                        "table2_area_profiles.csv", "table3_subareas.csv", "table5_historical_topics.csv",
                        "fig6_trend.csv", "trend.json"}) {
    if (!fs::exists(pipeline::reports_dir(out) / f)) ++missing;
  }
  const auto summary = pipeline::read_csv(pipeline::ingest_dir(out) / "table1_summary.csv");
  std::string documents, words;
  for (const auto& row : summary.rows) {
    if (row[0] == "documents") documents = row[1].get<std::string>();
    if (row[0] == "words") words = row[1].get<std::string>();
  }
  return verdict(missing == 0 && documents == "875",
                 "documents " + documents + " (expected 875), words " + words + " (not asserted), " +
                     std::to_string(missing) + " report files missing");
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double time_limit;  // seconds, 0 for none
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "generative-model fidelity", generative_fidelity, 10.0},
      {2, "dirichlet sampler", dirichlet_sampler, 5.0},
      {3, "dtm recovery", dtm_recovery, 120.0},
      {4, "degenerate models", degenerate_models, 0.0},
      {5, "assignment oracle", assignment_oracle, 0.0},
      {6, "statistics oracles", statistics_oracles, 0.0},
      {7, "preprocessing invariants", preprocessing_invariants, 0.0},
      {8, "coherence oracle", coherence_oracle, 0.0},
      {9, "determinism", determinism, 0.0},
      {10, "external corpus", external_corpus, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Status::kPass && c.time_limit > 0 && secs > c.time_limit) {
      o.status = Status::kFail;
      o.detail += "; over the " + fmt(c.time_limit) + " s limit";
    }
    const char* label = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", label, c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (o.status == Status::kFail) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
