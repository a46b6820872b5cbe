#pragma once

#include <span>
#include <vector>

namespace topictrend::model {

// exp(v_i) / sum_j exp(v_j), computed after subtracting max(v).
// Throws NonFiniteInput for NaN or infinite entries.
std::vector<double> softmax(std::span<const double> v);

// log(sum_j exp(v_j)), stable. Same error contract as softmax.
double log_sum_exp(std::span<const double> v);

}  // namespace topictrend::model
