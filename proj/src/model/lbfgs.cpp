#include "topictrend/model/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace topictrend::model {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double>& x, const LbfgsOptions& options) {
  const std::size_t n = x.size();
  std::vector<double> grad(n), new_grad(n), direction(n), trial(n);
  double value = f(x, grad);
  LbfgsResult result;
  result.value = value;
  if (!std::isfinite(value)) return result;

  std::deque<Correction> history;
  std::vector<double> alpha_buf;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (inf_norm(grad) <= options.grad_tolerance * std::max(1.0, std::abs(value))) {
      result.converged = true;
      break;
    }
    // Two-loop recursion: direction = -H * grad.
    for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
    alpha_buf.assign(history.size(), 0.0);
    for (std::size_t h = history.size(); h-- > 0;) {
      alpha_buf[h] = history[h].rho * dot(history[h].s, direction);
      for (std::size_t i = 0; i < n; ++i) direction[i] -= alpha_buf[h] * history[h].y[i];
    }
    double scale = 1.0;
    if (!history.empty()) {
      const auto& last = history.back();
      scale = dot(last.s, last.y) / dot(last.y, last.y);
    } else {
      scale = 1.0 / std::max(1.0, inf_norm(grad));
    }
    for (double& d : direction) d *= scale;
    for (std::size_t h = 0; h < history.size(); ++h) {
      const double beta = history[h].rho * dot(history[h].y, direction);
      for (std::size_t i = 0; i < n; ++i) direction[i] += (alpha_buf[h] - beta) * history[h].s[i];
    }
    double slope = dot(grad, direction);
    if (!(slope < 0.0)) {
      // Not a descent direction; restart from steepest descent.
      history.clear();
      const double s = 1.0 / std::max(1.0, inf_norm(grad));
      for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i] * s;
      slope = dot(grad, direction);
    }

    double step = 1.0;
    double new_value = value;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * direction[i];
      new_value = f(trial, new_grad);
      if (std::isfinite(new_value) && new_value <= value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = trial[i] - x[i];
      c.y[i] = new_grad[i] - grad[i];
    }
    const double sy = dot(c.s, c.y);
    const double decrease = value - new_value;
    x.swap(trial);
    grad.swap(new_grad);
    const double old_value = value;
    value = new_value;
    result.iterations = iter + 1;
    if (sy > 1e-12 * std::sqrt(dot(c.s, c.s) * dot(c.y, c.y))) {
      c.rho = 1.0 / sy;
      history.push_back(std::move(c));
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }
    if (decrease <= options.f_tolerance * std::max(1.0, std::abs(old_value))) {
      result.converged = true;
      break;
    }
  }
  result.value = value;
  return result;
}

}  // namespace topictrend::model
