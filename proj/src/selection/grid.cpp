#include "topictrend/selection/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "topictrend/analysis/assignment.hpp"
#include "topictrend/error.hpp"
#include "topictrend/model/dtm.hpp"
#include "topictrend/model/metrics.hpp"
#include "topictrend/model/parallel.hpp"

namespace topictrend::selection {

void GridSpec::validate() const {
  if (k_values.empty() || seeds.empty()) throw usage_error("InvalidArgument", "grid needs K values and seeds");
  for (int k : k_values) {
    if (k < 2) throw usage_error("InvalidArgument", "every K must be >= 2");
  }
  if (!(heldout_fraction > 0.0 && heldout_fraction < 1.0)) {
    throw usage_error("InvalidArgument", "heldout_fraction must be in (0, 1)");
  }
  if (!(assignment_mass > 0.0 && assignment_mass <= 1.0)) {
    throw usage_error("InvalidArgument", "assignment_mass must be in (0, 1]");
  }
  if (coherence_top_n < 2) throw usage_error("InvalidArgument", "coherence_top_n must be >= 2");
}

std::pair<ingest::TimeSlicedCorpus, ingest::TimeSlicedCorpus> split_heldout(const ingest::TimeSlicedCorpus& corpus,
                                                                            double fraction, std::uint64_t seed) {
  ingest::TimeSlicedCorpus train, heldout;
  train.vocabulary = heldout.vocabulary = corpus.vocabulary;
  train.rule = heldout.rule = corpus.rule;
  std::mt19937_64 rng(seed);
  for (const auto& slice : corpus.slices) {
    ingest::TimeSlice tr{slice.label, slice.start_year, slice.end_year, {}};
    ingest::TimeSlice ho = tr;
    const std::size_t n = slice.docs.size();
    std::size_t hold = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    hold = std::min(hold, n > 0 ? n - 1 : 0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> is_held(n, 0);
    for (std::size_t i = 0; i < hold; ++i) is_held[order[i]] = 1;
    for (std::size_t i = 0; i < n; ++i) (is_held[i] ? ho : tr).docs.push_back(slice.docs[i]);
    train.slices.push_back(std::move(tr));
    heldout.slices.push_back(std::move(ho));
  }
  return {std::move(train), std::move(heldout)};
}

GridCellMetrics evaluate_model(const model::FittedModel& model, const ingest::TimeSlicedCorpus& full,
                               const ingest::TimeSlicedCorpus& heldout, const GridSpec& grid) {
  GridCellMetrics m;
  m.K = model.hyper.num_topics;
  m.seed = model.hyper.seed;
  m.iterations = model.train_log.iterations;
  m.converged = model.train_log.converged;
  m.coherence = model::topic_coherence(model, full, grid.coherence_top_n).average;
  m.perplexity = heldout.num_tokens() > 0 ? model::log_perplexity(model, heldout) : std::nan("");
  const auto assignments = analysis::assign_all(model, grid.assignment_mass);
  m.empty_topics = analysis::empty_topic_count(assignments);
  m.unassigned_docs = analysis::unassigned_documents(model, assignments).size();
  return m;
}

std::vector<GridCellMetrics> run_grid(const ingest::TimeSlicedCorpus& corpus, const GridSpec& grid,
                                      const model::Hyperparams& hyper_base, const model::DtmOptions& options,
                                      const GridHooks& hooks) {
  grid.validate();
  corpus.validate();
  const auto [train, heldout] = split_heldout(corpus, grid.heldout_fraction, grid.split_seed);

  std::vector<std::pair<int, std::uint64_t>> cells;
  for (int k : grid.k_values) {
    for (auto s : grid.seeds) cells.emplace_back(k, s);
  }
  std::vector<GridCellMetrics> rows(cells.size());
  model::DtmOptions cell_options = options;
  cell_options.workers = 1;
  model::parallel_for(cells.size(), grid.workers, [&](std::size_t i) {
    const auto [k, seed] = cells[i];
    GridCellMetrics& row = rows[i];
    const auto start = std::chrono::steady_clock::now();
    try {
      std::optional<model::FittedModel> fitted;
      if (hooks.cached) fitted = hooks.cached(k, seed);
      if (!fitted) {
        model::Hyperparams hyper = hyper_base;
        hyper.num_topics = k;
        hyper.seed = seed;
        fitted = model::fit_dtm(train, hyper, cell_options);
        if (hooks.fitted) hooks.fitted(*fitted);
      }
      row = evaluate_model(*fitted, corpus, heldout, grid);
    } catch (const std::exception& e) {
      row = GridCellMetrics{};
      row.failed = true;
      row.error = e.what();
      row.coherence = row.perplexity = std::nan("");
    }
    row.K = k;
    row.seed = seed;
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

}  // namespace topictrend::selection
