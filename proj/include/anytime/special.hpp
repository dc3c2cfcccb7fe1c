#pragma once

// Regularized incomplete gamma functions. Series expansion for z < a + 1,
// modified Lentz continued fraction for the complement otherwise.

namespace anytime::special {

/// P(a, z) = gamma(a, z) / Gamma(a), the regularized lower incomplete gamma.
double gamma_p(double a, double z);

/// Q(a, z) = 1 - P(a, z).
double gamma_q(double a, double z);

/// log P(a, z), accurate when P underflows.
double log_gamma_p(double a, double z);

/// sum_{n>=0} z^n / ((a+1)(a+2)...(a+n)), so that
/// P(a, z) = z^a e^{-z} / Gamma(a+1) * series. Requires z >= 0.
double lower_gamma_series(double a, double z);

/// Q(a, z) by continued fraction; intended for z >= a + 1.
double upper_gamma_fraction(double a, double z);

}  // namespace anytime::special
