#pragma once

namespace topictrend::trend {

// P(T <= t) for Student's t with `df` degrees of freedom, from the
// regularized incomplete beta function. Throws InvalidDf for df < 1.
double student_t_cdf(double t, int df);

// Two-sided critical value: P(|T| <= q) = level. Throws InvalidDf.
double student_t_critical(double level, int df);

}  // namespace topictrend::trend
