#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::selection {

struct GridSpec {
  std::vector<int> k_values = {50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double heldout_fraction = 0.1;
  double assignment_mass = 0.5;
  // Seed of the held-out split; shared by every cell so perplexities compare.
  std::uint64_t split_seed = 20240101;
  std::size_t coherence_top_n = 10;
  unsigned workers = 1;

  // Throws InvalidArgument.
  void validate() const;
};

struct GridCellMetrics {
  int K = 0;
  std::uint64_t seed = 0;
  double coherence = 0.0;
  double perplexity = 0.0;
  std::size_t empty_topics = 0;
  std::size_t unassigned_docs = 0;
  double wall_time = 0.0;  // seconds
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

// Stratified split: in every slice round(fraction * n) documents, but never
// all of them, go to the held-out corpus. Both corpora keep the full
// vocabulary and slice structure (held-out slices may be empty).
std::pair<ingest::TimeSlicedCorpus, ingest::TimeSlicedCorpus> split_heldout(const ingest::TimeSlicedCorpus& corpus,
                                                                            double fraction, std::uint64_t seed);

// Selection metrics of a fitted model: coherence on `full`, perplexity on
// `heldout`, empty topics and unassigned documents under the mass rule.
GridCellMetrics evaluate_model(const model::FittedModel& model, const ingest::TimeSlicedCorpus& full,
                               const ingest::TimeSlicedCorpus& heldout, const GridSpec& grid);

struct GridHooks {
  // Returns a previously fitted model for (K, seed) to skip refitting.
  std::function<std::optional<model::FittedModel>(int, std::uint64_t)> cached;
  // Called with each newly fitted model, possibly from a worker thread.
  std::function<void(const model::FittedModel&)> fitted;
};

// One row per (K, seed), K-major in the order given. Cells run on a pool
// of grid.workers threads, each fit single-threaded. A failing cell is
// recorded with failed = true and its message; it never aborts the sweep.
std::vector<GridCellMetrics> run_grid(const ingest::TimeSlicedCorpus& corpus, const GridSpec& grid,
                                      const model::Hyperparams& hyper_base, const model::DtmOptions& options = {},
                                      const GridHooks& hooks = {});

}  // namespace topictrend::selection
