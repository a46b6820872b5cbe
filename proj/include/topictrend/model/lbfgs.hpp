#pragma once

#include <functional>
#include <span>
#include <vector>

namespace topictrend::model {

struct LbfgsOptions {
  int max_iters = 50;
  int memory = 8;
  // Stop when ||grad||_inf <= grad_tolerance * max(1, |f|).
  double grad_tolerance = 1e-7;
  // Stop when the relative decrease of f falls below this.
  double f_tolerance = 1e-10;
};

struct LbfgsResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Objective: returns f(x) and writes its gradient.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

// Limited-memory BFGS with a backtracking Armijo line search. Each accepted
// step decreases f, so the returned point is never worse than the start.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double>& x, const LbfgsOptions& options = {});

}  // namespace topictrend::model
