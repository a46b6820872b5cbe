#include "topictrend/model/softmax.hpp"

#include <algorithm>
#include <cmath>

#include "topictrend/error.hpp"

namespace topictrend::model {

namespace {

double checked_max(std::span<const double> v) {
  if (v.empty()) throw numerical_error("NonFiniteInput", "softmax of an empty vector");
  double m = v[0];
  for (double x : v) {
    if (!std::isfinite(x)) throw numerical_error("NonFiniteInput", "softmax input is not finite");
    m = std::max(m, x);
  }
  return m;
}

}  // namespace

std::vector<double> softmax(std::span<const double> v) {
  const double m = checked_max(v);
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

double log_sum_exp(std::span<const double> v) {
  const double m = checked_max(v);
  double total = 0.0;
  for (double x : v) total += std::exp(x - m);
  return m + std::log(total);
}

}  // namespace topictrend::model
