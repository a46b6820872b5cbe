#include "topictrend/selection/ranking.hpp"

#include <algorithm>
#include <cmath>

namespace topictrend::selection {

namespace {

bool by_cell(const GridCellMetrics& a, const GridCellMetrics& b) {
  if (a.K != b.K) return a.K < b.K;
  return a.seed < b.seed;
}

// Population z-scores; all zero when the values do not vary.
std::vector<double> z_scores(const std::vector<double>& v) {
  std::vector<double> z(v.size(), 0.0);
  if (v.empty()) return z;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(v.size()));
  if (!(sd > 0.0) || !std::isfinite(sd)) return z;
  for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - mean) / sd;
  return z;
}

}  // namespace

RankedReport rank_models(const std::vector<GridCellMetrics>& rows, const RankWeights& weights) {
  std::vector<GridCellMetrics> ok, failed;
  for (const auto& r : rows) {
    const bool usable = !r.failed && std::isfinite(r.coherence) && std::isfinite(r.perplexity);
    (usable ? ok : failed).push_back(r);
  }
  std::sort(ok.begin(), ok.end(), by_cell);
  std::sort(failed.begin(), failed.end(), by_cell);

  std::vector<double> coh, perp, empty, unassigned;
  for (const auto& r : ok) {
    coh.push_back(r.coherence);
    perp.push_back(r.perplexity);
    empty.push_back(static_cast<double>(r.empty_topics));
    unassigned.push_back(static_cast<double>(r.unassigned_docs));
  }
  const auto zc = z_scores(coh), zp = z_scores(perp), ze = z_scores(empty), zu = z_scores(unassigned);

  RankedReport report;
  report.weights = weights;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    RankedRow row{ok[i], 0.0, zc[i], zp[i], ze[i], zu[i]};
    row.score = weights.coherence * zc[i] - weights.perplexity * zp[i] - weights.empty_topics * ze[i] -
                weights.unassigned_docs * zu[i];
    report.rows.push_back(row);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RankedRow& a, const RankedRow& b) { return a.score > b.score; });
  for (const auto& r : failed) report.rows.push_back({r, std::nan(""), 0.0, 0.0, 0.0, 0.0});
  return report;
}

}  // namespace topictrend::selection
