#pragma once

#include <span>
#include <vector>

namespace topictrend::model {

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Maximum-weight perfect matching on an n x n matrix (row-major).
// Returns column assigned to each row.
std::vector<std::size_t> max_weight_assignment(const std::vector<double>& weights, std::size_t n);

// Cosine of every reference topic with the fitted topic it is matched to
// under the assignment that maximizes total cosine. Both lists hold the
// same number of equally long vectors.
std::vector<double> matched_cosines(const std::vector<std::vector<double>>& reference,
                                    const std::vector<std::vector<double>>& fitted);

}  // namespace topictrend::model
