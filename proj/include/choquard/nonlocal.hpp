#pragma once

#include <cstdint>

#include "choquard/constants.hpp"
#include "choquard/geometry.hpp"
#include "choquard/potential.hpp"
#include "choquard/quadrature.hpp"

namespace choquard {

// Riesz potential of a bubble power, in closed form:
//   (|x|^{-mu} * U_{lambda,xi}^{2*_mu})(x)
//     = d_frak (lambda / (1 + lambda^2 |x-xi|^2))^{mu/2},
// with d_frak = alpha^{2*_mu} I(mu/2).
double riesz_potential_bubble(const ProblemParams& params, double alpha,
                              double lambda, const Point& xi, const Point& x);

// d/dlambda of the closed form above.
double riesz_potential_lambda_derivative(const ProblemParams& params,
                                         double alpha, double lambda,
                                         const Point& xi, const Point& x);

// -Delta U_{lambda,xi} = N(N-2) alpha lambda^{(N+2)/2} (1+lambda^2|x-xi|^2)^{-(N+2)/2}.
double neg_laplacian_bubble(const ProblemParams& params, double alpha,
                            double lambda, const Point& xi, const Point& x);

// Residual of the potential-free critical equation at x,
//   -Delta U - (|x|^{-mu} * U^{2*_mu}) U^{2*_mu - 1};
// vanishes identically when alpha = alpha_coeff(params).
double bubble_residual(const ProblemParams& params, double alpha, double lambda,
                       const Point& xi, const Point& x);

// Residual of the linearized equation at the standard bubble (lambda=1, xi=0)
// for the kernel element Z_i, i in 1..N+1, using the closed-form convolutions
//   |x|^{-mu} * (U^{2*_mu - 1} Z_i) = (1/2*_mu) d_{x_i} (Riesz closed form),
//   |x|^{-mu} * (U^{2*_mu - 1} Z_{N+1}) = (1/2*_mu) d_lambda (Riesz closed form).
// Returns (residual, local scale).
struct KernelResidual {
  double residual = 0.0;
  double scale = 0.0;
};
KernelResidual kernel_linearized_residual(const ProblemParams& params,
                                          double alpha, int i, const Point& x);

// Pair interaction int (|x|^{-mu} * U_i^{2*_mu}) U_i^{2*_mu-1} U_j dx, reduced
// to a two-center integral through the Riesz closed form.  Asymptotically
// D_Nmu / (lambda |xi_i - xi_j|)^{N-2}.
QuadratureResult pair_interaction(const ProblemParams& params,
                                  const EnergyConstants& consts, double lambda,
                                  const Point& xi_i, const Point& xi_j,
                                  double tol,
                                  std::int64_t budget = kDefaultBudget);

// Full energy of the ansatz,
//   I(W) = 1/2 int (|grad W|^2 + V W^2) - 1/(2 2*_mu) int (|x|^{-mu}*W^{2*}) W^{2*}.
// For mu = 4 (2*_mu = 2) the Choquard term expands exactly; every piece except
// the four-distinct-center double convolutions reduces to <= 3D deterministic
// quadrature, and that irreducible remainder is estimated in one unbiased
// Monte Carlo pass.  For mu != 4 the Choquard term is estimated entirely by
// Monte Carlo with error bars.
QuadratureResult ansatz_energy(const BubbleConfig& config,
                               const RadialPotential& potential,
                               const EnergyConstants& consts, double tol,
                               std::int64_t budget = kDefaultBudget,
                               std::uint64_t seed = 1234);

// Pointwise error term of the pure ansatz (mu = 4 path),
//   E(x) = g(W) - sum_j g(U_j) - V W,
// together with the ||.||_** weight lambda^{(N+2)/2} sum_j (1+lambda|x-xi_j|)^{-((N+2)/2+tau)}.
struct ErrorTermSample {
  Point x;
  double value = 0.0;
  double weight = 0.0;
};
ErrorTermSample error_term_eval(const BubbleConfig& config,
                                const RadialPotential& potential,
                                const EnergyConstants& consts, const Point& x,
                                double tau = 0.5, double tol = 1e-4,
                                std::int64_t budget = kDefaultBudget);

// The ||.||_** weight alone.
double error_term_weight(const BubbleConfig& config, const Point& x,
                         double tau = 0.5);

// Importance-sampling strata covering a configuration: one Cauchy bump per
// bubble plus a wide far-field component.
std::vector<McStratum> config_strata(const BubbleConfig& config);

}  // namespace choquard
