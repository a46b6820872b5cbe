#pragma once

#include <vector>

namespace topictrend::trend {

struct BandPoint {
  double x = 0.0;
  double fit = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct TrendResult {
  std::size_t n = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;
  int df = 0;
  double t_stat = 0.0;
  // P(T_df <= t_stat): the p-value for H1: r < 0.
  double p_one_sided_less = 0.5;
  double residual_se = 0.0;
  double t_critical = 0.0;  // 97.5% quantile used for the band
  // 95% confidence band for the regression mean at every input x.
  std::vector<BandPoint> ci_band;
};

// Least-squares line of y on x with Pearson r and its t test
// (t = r sqrt(df) / sqrt(1 - r^2), df = n - 2). Constant y gives r = 0,
// slope 0 and p = 0.5.
//
// Throws InsufficientData (n < 3), DegenerateX (all x equal),
// InvalidArgument (length mismatch), NonFiniteInput.
TrendResult ols_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace topictrend::trend
