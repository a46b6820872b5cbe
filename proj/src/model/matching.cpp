#include "topictrend/model/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topictrend/error.hpp"

namespace topictrend::model {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw numerical_error("DimensionMismatch", "vectors differ in length");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::vector<std::size_t> max_weight_assignment(const std::vector<double>& weights, std::size_t n) {
  if (weights.size() != n * n) throw numerical_error("DimensionMismatch", "weight matrix must be n x n");
  if (n == 0) return {};
  const double top = *std::max_element(weights.begin(), weights.end());
  auto cost = [&](std::size_t i, std::size_t j) { return top - weights[(i - 1) * n + (j - 1)]; };
  // Shortest augmenting path with potentials; rows and columns 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<double> matched_cosines(const std::vector<std::vector<double>>& reference,
                                    const std::vector<std::vector<double>>& fitted) {
  const std::size_t n = reference.size();
  if (fitted.size() != n) throw numerical_error("DimensionMismatch", "topic counts differ");
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) w[i * n + j] = cosine_similarity(reference[i], fitted[j]);
  }
  const auto match = max_weight_assignment(w, n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i * n + match[i]];
  return out;
}

}  // namespace topictrend::model
