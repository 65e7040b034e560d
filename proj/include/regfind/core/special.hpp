#pragma once

// Special functions needed by the posterior and entropy code.

namespace regfind::special {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
// Continued fraction (modified Lentz) with the symmetry swap when
// x > (a + 1) / (a + b + 2). Absolute accuracy about 1e-13.
double incomplete_beta(double a, double b, double x);

// Upper tail 1 - I_x(a, b), evaluated without cancellation.
double incomplete_beta_upper(double a, double b, double x);

// Digamma for x > 0: upward recurrence to x >= 6, then the asymptotic series.
double digamma(double x);

// Standard normal CDF and its inverse. normal_quantile(0) = -inf,
// normal_quantile(1) = +inf.
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace regfind::special
