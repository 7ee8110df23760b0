#pragma once

#include <stdexcept>
#include <string>

#include "choquard/constants.hpp"
#include "choquard/potential.hpp"

namespace choquard {

// The requested extremum of r^2 V(r) is missing or sits on the boundary.
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A critical point was found but its Hessian signature does not match the
// requested case.
struct ClassificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact polygon interaction sum
//   sum_{j=2}^k |xi_j - xi_1|^{-(N-2)} = (2r)^{-(N-2)} sum cosec^{N-2},
// evaluated with the even/odd half-sum split.
double sine_sum(int k, double r, int N);

// Scaling exponent nu = (N-2)/(N-4) of the concentration window.
double lambda_scaling_exponent(int N);

// Reduced energy of the polygon ansatz (leading terms):
//   F(r, lambda) = k [ A + B1 V(r)/lambda^2 - B2 lambda^{-(N-2)} sine_sum(k,r,N) ].
// The asymptotic variant replaces the exact sum by B0 k^{N-2}/r^{N-2} with the
// combined constant B2 * b0_geom (the sine-sum constant enters the energy only
// through that product).
double reduced_F(int k, double r, double lambda, const RadialPotential& potential,
                 const EnergyConstants& consts, bool asymptotic = false);
double reduced_F_dlambda(int k, double r, double lambda,
                         const RadialPotential& potential,
                         const EnergyConstants& consts, bool asymptotic = false);
double reduced_F_dr(int k, double r, double lambda,
                    const RadialPotential& potential,
                    const EnergyConstants& consts, bool asymptotic = false);
// Hessian in the (r, lambda) variables: [d2F/dr2, d2F/drdlambda; ., d2F/dlambda2].
void reduced_F_hessian(int k, double r, double lambda,
                       const RadialPotential& potential,
                       const EnergyConstants& consts, double hess[3],
                       bool asymptotic = false);

// The lambda-scale maximizing the reduced-energy profile at fixed r.
struct LambdaStar {
  double Lambda0 = 0.0;            // asymptotic scale factor
  double lambda_asymptotic = 0.0;  // Lambda0 k^{(N-2)/(N-4)}
  double lambda_refined = 0.0;     // root of the exact-sum dF/dlambda
};
LambdaStar lambda_star(double r, int k, const RadialPotential& potential,
                       const EnergyConstants& consts);

// Value of B1 V(r)/lambda^2 - B2 B0 k^{N-2}/(lambda^{N-2} r^{N-2}) on the ridge
// lambda = Lambda0(r) k^{nu}; equals
//   ridge_b_prime * (r^2 V(r))^{(N-2)/(N-4)} * k^{-2 nu}.
double along_ridge_profile(double r, int k, const RadialPotential& potential,
                           const EnergyConstants& consts);
double ridge_b_prime(int N, const EnergyConstants& consts);
// Exponent of r^2 V(r) in the ridge profile: (N-2)/(N-4).
double ridge_profile_exponent(int N);

// Search region of the critical-point problem.
struct ReducedEnergyDomain {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double delta1 = 0.0;  // Lambda half-width around Lambda0(r)
  double theta = 0.05;
};
// delta1 = k^{-(3 theta/2)(N-2)/(N-4)}.
ReducedEnergyDomain make_domain(int N, int k, double r0, double delta,
                                double theta = 0.05);

struct SaddleBracket {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eta = 0.0;
  double b_prime = 0.0;
  double level = 0.0;  // critical value of -F
};

enum class CriticalCase { max, saddle };

struct CriticalPoint {
  double r_star = 0.0;
  double Lambda_star = 0.0;
  double lambda_star = 0.0;
  double F_star = 0.0;
  std::string classification;  // "max" or "saddle"
  double grad_norm = 0.0;      // |grad F| scaled by lambda^2/(k A)
  double hess_eig_lo = 0.0;
  double hess_eig_hi = 0.0;
  bool has_bracket = false;
  SaddleBracket bracket;
};

// Case max: interior maximizer of F over the domain (grid scan plus Newton).
// Case saddle: zero of grad F with signature (+ along r, - along lambda),
// found from the minimizer of r^2 V(r), with the level bracket
// alpha1 < -F(saddle) < alpha2 populated.  Throws HypothesisError when the
// profile extremum is absent or on the boundary, ClassificationError when the
// Hessian signature disagrees with the requested case.
CriticalPoint find_critical_point(CriticalCase which, int k,
                                  const RadialPotential& potential,
                                  const ReducedEnergyDomain& domain,
                                  const EnergyConstants& consts,
                                  double eta = 0.01);

}  // namespace choquard
