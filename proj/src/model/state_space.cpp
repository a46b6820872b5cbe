#include "topictrend/model/state_space.hpp"

#include <cmath>
#include <numbers>

namespace topictrend::model {

ChainGains chain_gains(double prior_var, double step_var, std::span<const double> obs_var) {
  const std::size_t T = obs_var.size();
  ChainGains g;
  g.predicted.resize(T);
  g.filtered.resize(T);
  g.gain.resize(T);
  g.smoothed.resize(T);
  g.backward.resize(T > 0 ? T - 1 : 0);
  for (std::size_t t = 0; t < T; ++t) {
    g.predicted[t] = t == 0 ? prior_var : g.filtered[t - 1] + step_var;
    g.gain[t] = g.predicted[t] / (g.predicted[t] + obs_var[t]);
    g.filtered[t] = (1.0 - g.gain[t]) * g.predicted[t];
  }
  if (T == 0) return g;
  g.smoothed[T - 1] = g.filtered[T - 1];
  for (std::size_t t = T - 1; t-- > 0;) {
    g.backward[t] = g.filtered[t] / g.predicted[t + 1];
    g.smoothed[t] = g.filtered[t] + g.backward[t] * g.backward[t] * (g.smoothed[t + 1] - g.predicted[t + 1]);
  }
  return g;
}

void smooth_means(const ChainGains& gains, double prior_mean, std::span<const double> obs,
                  std::span<double> means) {
  const std::size_t T = gains.length();
  double previous = prior_mean;
  for (std::size_t t = 0; t < T; ++t) {
    means[t] = (1.0 - gains.gain[t]) * previous + gains.gain[t] * obs[t];
    previous = means[t];
  }
  for (std::size_t t = T - 1; t-- > 0;) {
    means[t] = (1.0 - gains.backward[t]) * means[t] + gains.backward[t] * means[t + 1];
  }
}

void smooth_means_adjoint(const ChainGains& gains, std::span<const double> grad_means,
                          std::span<double> grad_obs) {
  const std::size_t T = gains.length();
  // Reverse of the backward pass: s_t = (1 - B_t) f_t + B_t s_{t+1}, t ascending in reverse.
  std::vector<double> gs(grad_means.begin(), grad_means.end());
  std::vector<double> gf(T, 0.0);
  for (std::size_t t = 0; t + 1 < T; ++t) {
    gf[t] += (1.0 - gains.backward[t]) * gs[t];
    gs[t + 1] += gains.backward[t] * gs[t];
  }
  gf[T - 1] += gs[T - 1];
  // Reverse of the forward pass: f_t = (1 - G_t) f_{t-1} + G_t y_t.
  for (std::size_t t = T; t-- > 0;) {
    grad_obs[t] = gains.gain[t] * gf[t];
    if (t > 0) gf[t - 1] += (1.0 - gains.gain[t]) * gf[t];
  }
}

double chain_expected_log_prior(const ChainGains& gains, std::span<const double> means,
                                double prior_mean, double prior_var, double step_var) {
  const std::size_t T = gains.length();
  const double two_pi = 2.0 * std::numbers::pi;
  const double d0 = means[0] - prior_mean;
  double total = -0.5 * std::log(two_pi * prior_var) - (d0 * d0 + gains.smoothed[0]) / (2.0 * prior_var);
  for (std::size_t t = 1; t < T; ++t) {
    const double diff = means[t] - means[t - 1];
    const double cross = gains.backward[t - 1] * gains.smoothed[t];
    const double second_moment = diff * diff + gains.smoothed[t] + gains.smoothed[t - 1] - 2.0 * cross;
    total += -0.5 * std::log(two_pi * step_var) - second_moment / (2.0 * step_var);
  }
  return total;
}

double chain_entropy(const ChainGains& gains) {
  const std::size_t T = gains.length();
  const double c = std::log(2.0 * std::numbers::pi * std::numbers::e);
  double h = 0.5 * (c + std::log(gains.smoothed[T - 1]));
  for (std::size_t t = 0; t + 1 < T; ++t) {
    // Var(x_t | x_{t+1}) under the smoothing distribution.
    h += 0.5 * (c + std::log(gains.filtered[t] * (1.0 - gains.backward[t])));
  }
  return h;
}

}  // namespace topictrend::model
