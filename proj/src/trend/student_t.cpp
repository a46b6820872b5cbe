#include "topictrend/trend/student_t.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "topictrend/error.hpp"

namespace topictrend::trend {

namespace {

void check_df(int df) {
  if (df < 1) throw usage_error("InvalidDf", "degrees of freedom must be >= 1, got " + std::to_string(df));
}

}  // namespace

double student_t_cdf(double t, int df) {
  check_df(df);
  if (std::isnan(t)) throw numerical_error("NonFiniteInput", "t is NaN");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t == 0.0) return 0.5;
  const double nu = static_cast<double>(df);
  // Lower tail mass beyond |t|: 0.5 * I_{nu/(nu+t^2)}(nu/2, 1/2).
  const double tail = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + t * t));
  return t < 0.0 ? tail : 1.0 - tail;
}

double student_t_critical(double level, int df) {
  check_df(df);
  if (!(level > 0.0 && level < 1.0)) throw usage_error("InvalidArgument", "level must be in (0, 1)");
  boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.5 + 0.5 * level);
}

}  // namespace topictrend::trend
