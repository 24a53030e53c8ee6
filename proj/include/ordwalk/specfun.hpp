#pragma once

#include "ordwalk/logsigned.hpp"

namespace ordwalk {

double log_factorial(long long n);

// q_n(x) = x^{n-1}/(n-1)! for x > 0 and n >= 1, identically 0 for n <= 0.
double q_poly(long long n, double x);
LogSigned q_poly_log(long long n, double x);

// Gamma(n,1) density in log-signed form; n < 0 yields zero, n == 0 is the
// unit atom at the origin and is rejected.
LogSigned gamma_density_log(long long n, double t);
double gamma_density(long long n, double t);

// Regularized lower incomplete gamma P(shape, t) via the series /
// continued-fraction split at t = shape.
double reg_lower_gamma(double shape, double t);
double reg_upper_gamma(double shape, double t);

// E[G^m] for G ~ Gamma(shape,1): rising factorial shape(shape+1)...(shape+m-1).
// shape == 0 encodes the constant 0, so moments are 0 for m >= 1.
double gamma_moment(long long shape, long long m);

// Gamma(z) with explicit sign for negative non-integer arguments
// (reflection formula). Nonpositive integers are poles.
LogSigned signed_log_gamma(double z);

// Generalized binomial coefficient C(a, n) for real a, integer n >= 0,
// with sign tracked through log-gamma. Exact zero when a is an integer
// in [0, n).
LogSigned log_binomial_signed(double a, long long n);

// Smallest t with reg_upper_gamma(shape, t) <= tail (upper quantile bound)
// and largest t with reg_lower_gamma(shape, t) <= tail (lower bound).
double gamma_upper_quantile(double shape, double tail);
double gamma_lower_quantile(double shape, double tail);

}  // namespace ordwalk
