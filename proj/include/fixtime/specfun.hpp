#pragma once

namespace fixtime::specfun {

// Gamma function for z > 0 (negative arguments are out of scope here).
double gamma(double z);
double log_gamma(double z);

// Unregularized incomplete Beta B(x; a, b) = int_0^x t^(a-1)(1-t)^(b-1) dt.
// The complete value is inc_beta(1, a, b).
double inc_beta(double x, double a, double b);

// Inverse of the above in x for fixed (a, b): y in [0, B(1; a, b)].
double inc_beta_inv(double y, double a, double b);

double erf(double x);
double erf_inv(double y);  // y in (-1, 1)

// Cosine integral Ci(x) and shifted sine integral si(x) = Si(x) - pi/2,
// both for x > 0.
double cosint(double x);
double sinint_shifted(double x);

}  // namespace fixtime::specfun
