#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "test_support.hpp"
#include "topictrend/error.hpp"
#include "topictrend/selection/grid.hpp"
#include "topictrend/selection/ranking.hpp"

using namespace topictrend;
using namespace topictrend::selection;
using topictrend::testing::error_kind;

namespace {

// Two groups of documents over disjoint halves of the vocabulary.
ingest::TimeSlicedCorpus two_cluster_corpus() {
  std::mt19937_64 rng(31);
  std::vector<std::pair<int, ingest::TokenList>> docs;
  for (int d = 0; d < 80; ++d) {
    const char prefix = d % 2 ? 'a' : 'z';
    ingest::TokenList tokens;
    for (int i = 0; i < 40; ++i) tokens.push_back(std::string(1, prefix) + std::to_string(rng() % 8));
    docs.push_back({2000 + d % 2, tokens});
  }
  return topictrend::testing::corpus_from_tokens(docs);
}

GridCellMetrics row(int k, std::uint64_t seed, double coh, double perp, std::size_t empty, std::size_t unassigned) {
  GridCellMetrics m;
  m.K = k;
  m.seed = seed;
  m.coherence = coh;
  m.perplexity = perp;
  m.empty_topics = empty;
  m.unassigned_docs = unassigned;
  return m;
}

std::vector<double> zscores(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean) / n;
  std::vector<double> z;
  for (double x : v) z.push_back(var > 0 ? (x - mean) / std::sqrt(var) : 0.0);
  return z;
}

}  // namespace

TEST_CASE("held-out split is stratified and seeded") {
  const auto corpus = topictrend::testing::random_corpus(47, 20, 15, 3, 8);
  const auto [train, held] = split_heldout(corpus, 0.1, 99);
  REQUIRE(train.slices.size() == corpus.slices.size());
  REQUIRE(held.slices.size() == corpus.slices.size());
  CHECK(train.vocabulary == corpus.vocabulary);
  for (std::size_t t = 0; t < corpus.slices.size(); ++t) {
    const std::size_t n = corpus.slices[t].docs.size();
    const auto expected = std::min<std::size_t>(static_cast<std::size_t>(std::llround(0.1 * n)), n - 1);
    CHECK(held.slices[t].docs.size() == expected);
    CHECK(train.slices[t].docs.size() + held.slices[t].docs.size() == n);
    std::set<std::string> ids;
    for (const auto& d : train.slices[t].docs) ids.insert(d.id);
    for (const auto& d : held.slices[t].docs) CHECK(ids.insert(d.id).second);
  }
  const auto again = split_heldout(corpus, 0.1, 99);
  CHECK(again.first == train);
  CHECK(again.second == held);
  // A one-document slice keeps its document for training.
  const auto tiny = topictrend::testing::corpus_from_tokens({{2000, {"a", "b"}}});
  CHECK(split_heldout(tiny, 0.9, 1).second.num_documents() == 0);
}

TEST_CASE("grid cardinality, determinism and failure isolation") {
  const auto corpus = two_cluster_corpus();
  GridSpec grid;
  grid.k_values = {2, 3};
  grid.seeds = {1, 2};
  model::Hyperparams hyper;
  model::DtmOptions opts;
  opts.max_iters = 5;
  const auto rows = run_grid(corpus, grid, hyper, opts);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].K == 2);
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);
  CHECK(rows[3].K == 3);
  for (const auto& r : rows) {
    CHECK_FALSE(r.failed);
    CHECK(r.empty_topics <= static_cast<std::size_t>(r.K));
    CHECK(r.unassigned_docs <= corpus.num_documents());
    CHECK(std::isfinite(r.perplexity));
  }
  const auto again = run_grid(corpus, grid, hyper, opts);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].coherence == rows[i].coherence);
    CHECK(again[i].perplexity == rows[i].perplexity);
  }

  GridHooks hooks;
  hooks.fitted = [](const model::FittedModel& m) {
    if (m.num_topics() == 3) throw std::runtime_error("simulated failure");
  };
  grid.workers = 2;
  const auto partial = run_grid(corpus, grid, hyper, opts, hooks);
  REQUIRE(partial.size() == 4);
  CHECK_FALSE(partial[0].failed);
  CHECK(partial[0].coherence == rows[0].coherence);
  CHECK(partial[2].failed);
  CHECK(partial[2].K == 3);
  CHECK(partial[2].error == "simulated failure");

  grid.k_values = {1};
  CHECK(error_kind([&] { run_grid(corpus, grid, hyper, opts); }) == "InvalidArgument");
}

TEST_CASE("over-segmenting a two-cluster corpus lowers coherence") {
  // Ten core words per cluster plus a heavy background of rare words from a
  // shared pool. Two topics capture the clusters; the surplus topics of a
  // larger K end up on background words that seldom co-occur.
  std::mt19937_64 rng(32);
  std::vector<std::pair<int, ingest::TokenList>> docs;
  for (int d = 0; d < 120; ++d) {
    const char prefix = d % 2 ? 'a' : 'z';
    ingest::TokenList tokens;
    for (int i = 0; i < 40; ++i) {
      if (rng() % 100 < 60) {
        tokens.push_back(std::string(1, prefix) + std::to_string(rng() % 10));
      } else {
        tokens.push_back("n" + std::to_string(rng() % 300));
      }
    }
    docs.push_back({2000 + d % 2, tokens});
  }
  const auto corpus = topictrend::testing::corpus_from_tokens(docs);
  GridSpec grid;
  grid.k_values = {2, 6};
  grid.seeds = {1, 2};
  model::DtmOptions opts;
  opts.max_iters = 20;
  const auto rows = run_grid(corpus, grid, model::Hyperparams{}, opts);
  const double k2 = (rows[0].coherence + rows[1].coherence) / 2;
  const double k6 = (rows[2].coherence + rows[3].coherence) / 2;
  CHECK(k2 >= k6);
}

TEST_CASE("ranking follows the weighted z-score oracle") {
  const std::vector<GridCellMetrics> rows = {
      row(2, 1, -40.0, 3.1, 0, 4), row(2, 2, -42.0, 3.0, 1, 2), row(3, 1, -38.0, 3.3, 0, 9),
      row(3, 2, -45.0, 2.9, 2, 1), row(4, 1, -39.5, 3.2, 1, 0), row(4, 2, -41.0, 3.05, 0, 3),
  };
  const RankWeights w{1.0, 2.0, 0.5, 1.5};
  std::vector<double> c, p, e, u;
  for (const auto& r : rows) {
    c.push_back(r.coherence);
    p.push_back(r.perplexity);
    e.push_back(static_cast<double>(r.empty_topics));
    u.push_back(static_cast<double>(r.unassigned_docs));
  }
  const auto zc = zscores(c), zp = zscores(p), ze = zscores(e), zu = zscores(u);
  std::vector<std::pair<double, std::size_t>> expected;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    expected.push_back({w.coherence * zc[i] - w.perplexity * zp[i] - w.empty_topics * ze[i] - w.unassigned_docs * zu[i], i});
  }
  std::sort(expected.begin(), expected.end(), [](auto& a, auto& b) { return a.first > b.first; });

  const auto report = rank_models(rows, w);
  REQUIRE(report.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& want = rows[expected[i].second];
    CHECK(report.rows[i].metrics.K == want.K);
    CHECK(report.rows[i].metrics.seed == want.seed);
    CHECK(std::abs(report.rows[i].score - expected[i].first) < 1e-12);
  }
  CHECK(report.weights.perplexity == 2.0);

  // Input order does not matter.
  auto shuffled = rows;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto other = rank_models(shuffled, w);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      CHECK(other.rows[j].metrics.K == report.rows[j].metrics.K);
      CHECK(other.rows[j].metrics.seed == report.rows[j].metrics.seed);
      CHECK(other.rows[j].score == report.rows[j].score);
    }
  }
}

TEST_CASE("ranking edge cases") {
  const auto single = rank_models({row(5, 1, -1.0, 2.0, 0, 0)});
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].score == 0.0);

  const auto pair = rank_models({row(2, 1, -50.0, 3.0, 0, 0), row(2, 2, -10.0, 3.0, 0, 0)});
  CHECK(pair.rows[0].metrics.seed == 2);

  auto failed = row(9, 1, NAN, NAN, 0, 0);
  failed.failed = true;
  const auto with_failure = rank_models({failed, row(2, 1, -5.0, 3.0, 0, 0), row(3, 1, -6.0, 3.0, 0, 0)});
  CHECK(with_failure.rows.back().metrics.failed);
  CHECK(with_failure.rows[0].metrics.K == 2);
}
