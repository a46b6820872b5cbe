#include "topictrend/trend/ols.hpp"

#include <algorithm>
#include <cmath>

#include "topictrend/error.hpp"
#include "topictrend/trend/student_t.hpp"

namespace topictrend::trend {

TrendResult ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw usage_error("InvalidArgument", "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw data_error("InsufficientData", "need at least 3 points, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw numerical_error("NonFiniteInput", "non-finite x or y");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw numerical_error("DegenerateX", "all x values are equal");

  TrendResult out;
  out.n = n;
  out.df = static_cast<int>(n) - 2;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r = syy == 0.0 ? 0.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(out.r) == 1.0) {
    out.t_stat = out.r * INFINITY;
  } else {
    out.t_stat = out.r * std::sqrt(static_cast<double>(out.df)) / std::sqrt(1.0 - out.r * out.r);
  }
  out.p_one_sided_less = student_t_cdf(out.t_stat, out.df);

  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (out.intercept + out.slope * x[i]);
    sse += e * e;
  }
  out.residual_se = std::sqrt(sse / static_cast<double>(out.df));
  out.t_critical = student_t_critical(0.95, out.df);
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = out.intercept + out.slope * x[i];
    const double dx = x[i] - mx;
    const double half =
        out.t_critical * out.residual_se * std::sqrt(1.0 / static_cast<double>(n) + dx * dx / sxx);
    out.ci_band.push_back({x[i], fit, fit - half, fit + half});
  }
  return out;
}

}  // namespace topictrend::trend
