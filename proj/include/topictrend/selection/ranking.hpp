#pragma once

#include <vector>

#include "topictrend/selection/grid.hpp"

namespace topictrend::selection {

struct RankWeights {
  double coherence = 1.0;
  double perplexity = 1.0;
  double empty_topics = 1.0;
  double unassigned_docs = 1.0;
};

struct RankedRow {
  GridCellMetrics metrics;
  double score = 0.0;
  // z-scores of coherence, perplexity, empty_topics, unassigned_docs.
  double z_coherence = 0.0;
  double z_perplexity = 0.0;
  double z_empty_topics = 0.0;
  double z_unassigned_docs = 0.0;
};

struct RankedReport {
  RankWeights weights;
  std::vector<RankedRow> rows;  // best first; failed cells last
};

// Scores each successful row by
//   w_c z(coherence) - w_p z(perplexity) - w_e z(empty) - w_u z(unassigned)
// with population z-scores over successful rows (a metric with zero spread
// contributes 0). Sorted by score descending, then K, then seed, so the
// result does not depend on the input order.
RankedReport rank_models(const std::vector<GridCellMetrics>& rows, const RankWeights& weights = {});

}  // namespace topictrend::selection
