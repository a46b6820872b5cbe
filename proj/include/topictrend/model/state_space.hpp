#pragma once

#include <span>
#include <vector>

namespace topictrend::model {

// Variance-side quantities of a scalar Gaussian random walk observed with
// noise:
//
//   x_0 ~ N(prior_mean, prior_var),  x_t | x_{t-1} ~ N(x_{t-1}, step_var),
//   y_t | x_t ~ N(x_t, obs_var[t]).
//
// They do not depend on the observed values, so one ChainGains serves every
// chain that shares the variances (all words of all topics, for instance).
struct ChainGains {
  std::vector<double> predicted;  // P_{t|t-1}
  std::vector<double> filtered;   // P_{t|t}
  std::vector<double> gain;       // Kalman gain
  std::vector<double> backward;   // RTS smoother gain, size T-1
  std::vector<double> smoothed;   // P_{t|T}

  std::size_t length() const { return predicted.size(); }
};

ChainGains chain_gains(double prior_var, double step_var, std::span<const double> obs_var);

// Smoothed means E[x_t | y_0..y_{T-1}] (forward filter, backward RTS pass).
void smooth_means(const ChainGains& gains, double prior_mean, std::span<const double> obs,
                  std::span<double> means);

// Given d(objective)/d(means), returns d(objective)/d(obs) for the linear
// map computed by smooth_means.
void smooth_means_adjoint(const ChainGains& gains, std::span<const double> grad_means,
                          std::span<double> grad_obs);

// E_q[log p(x_0..x_{T-1})] under the chain prior, where q is Gaussian with
// the given smoothed means and the gains' covariance structure.
double chain_expected_log_prior(const ChainGains& gains, std::span<const double> means,
                                double prior_mean, double prior_var, double step_var);

// Differential entropy of q.
double chain_entropy(const ChainGains& gains);

}  // namespace topictrend::model
