#pragma once

// Scalar special functions used by the closed-form constants: Gamma (Lanczos),
// log-Gamma, Beta, Riemann zeta, and sphere/ball measure factors.

namespace choquard {

// Gamma function for real x > 0, Lanczos approximation (g = 7, 9 terms).
// Relative error is a few ulps over the range used here.  Throws
// std::domain_error for x <= 0.
double gamma_fn(double x);

// log(Gamma(x)) for x > 0, evaluated without forming Gamma(x) so that large
// arguments do not overflow.
double log_gamma_fn(double x);

// Euler Beta function B(a, b), a > 0, b > 0.
double beta_fn(double a, double b);

// Riemann zeta(s), s > 1, by direct summation with an Euler-Maclaurin tail.
double zeta_fn(double s);

// Surface area of the unit sphere S^{m} embedded in R^{m+1}.
double sphere_area(int m);

// Volume of the unit ball in R^n.
double ball_volume(int n);

}  // namespace choquard
