#pragma once

namespace hawkes::special {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series for x < a + 1, Lentz continued fraction for Q otherwise.
double gamma_p(double a, double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF; |error| below 1e-12 on (0, 1).
double normal_quantile(double p);

/// e^u - 1 - u without cancellation near u = 0.
double exp_excess(double u);

}  // namespace hawkes::special
