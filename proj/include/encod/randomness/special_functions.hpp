#pragma once

namespace encod::randomness {

/// Regularized lower incomplete gamma P(a, x). Series for x < a + 1,
/// Lentz continued fraction otherwise. Throws ArgumentError if a <= 0 or x < 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x) (NIST "igamc").
double gamma_q(double a, double x);

/// CDF of the chi-square distribution: P(df/2, x/2).
double chi_square_cdf(double x, int df);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace encod::randomness
