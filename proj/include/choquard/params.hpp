#pragma once

#include <stdexcept>

namespace choquard {

// Problem data for the critical Choquard equation
//   -Delta u + V(|x|) u = (|x|^{-mu} * |u|^{2s}) |u|^{2s-2} u   in R^N
// with 2s = two_star_mu = (2N - mu)/(N - 2) the upper critical exponent.
//
// The regime covered is N >= 5 and 0 < mu <= 4, so two_star_mu >= 2 with
// equality exactly at mu = 4.
struct ProblemParams {
  int N = 5;
  double mu = 4.0;
  double two_star_mu = 2.0;

  ProblemParams(int dim, double mu_in) : N(dim), mu(mu_in) {
    if (N < 5) throw std::domain_error("ProblemParams: requires N >= 5");
    if (N > 8) throw std::domain_error("ProblemParams: N > 8 unsupported");
    if (!(mu > 0.0) || mu > 4.0)
      throw std::domain_error("ProblemParams: requires 0 < mu <= 4");
    two_star_mu = (2.0 * N - mu) / (N - 2.0);
  }
};

}  // namespace choquard
