#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "choquard/geometry.hpp"
#include "choquard/nonlocal.hpp"
#include "choquard/potential.hpp"

namespace choquard {

// Bubble-adapted sup-norm weights:
//   star:      lambda^{-(N-2)/2} |u| / sum_j (1+lambda|x-xi_j|)^{-((N-2)/2+tau)}
//   star_star: lambda^{-(N+2)/2} |h| / sum_j (1+lambda|x-xi_j|)^{-((N+2)/2+tau)}
struct WeightedNormSpec {
  enum class Kind { star, star_star };
  Kind kind = Kind::star;
  double tau = 0.5;
  double exponent = 0.0;      // (N-2)/2+tau or (N+2)/2+tau
  double lambda_power = 0.0;  // -(N-2)/2 or -(N+2)/2

  WeightedNormSpec(Kind kind_in, int N, double tau_in = 0.5);
};

// The weighted ratio whose sup over x defines the norm.
double weighted_ratio(const WeightedNormSpec& spec, const BubbleConfig& config,
                      double fx, const Point& x);

struct NormEstimate {
  double value = 0.0;
  bool converged = true;
};

// Lower estimate of the weighted sup norm: the weighted |f| is maximized over
// a structured candidate set (bubble centers, pair midpoints, rings at radii
// lambda^{-1} {1/2, 1, 2, 4}, the symmetry axis, random far-field points) and
// refined by compass pattern search from the best candidates.  Enlarging the
// budget never decreases the estimate.  restrict_to_first_sector cuts the
// candidate set down to (the closure of) Omega_1 for fully symmetric f.
NormEstimate weighted_norm_estimate(const std::function<double(const Point&)>& f,
                                    const WeightedNormSpec& spec,
                                    const BubbleConfig& config,
                                    std::int64_t sampling_budget,
                                    std::uint64_t seed = 7,
                                    bool restrict_to_first_sector = false);

// Least-squares fit of log(norm) against log(lambda).
struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (log lambda, log norm)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool degenerate_zero = false;  // all norms at roundoff: no slope to fit
  bool monotone = true;          // norms decreasing along the grid
};

// Decay of ||E||_** along a lambda grid at fixed k.  candidate_budget bounds
// the number of error-term evaluations per lambda.
SlopeFit error_decay_slope(int k, const ProblemParams& params,
                           const RadialPotential& potential,
                           const EnergyConstants& consts, double r,
                           const std::vector<double>& lambda_grid,
                           std::int64_t candidate_budget = 160,
                           double quad_tol = 1e-4);

struct WitnessResult {
  double c_witness = 0.0;
  bool pass = false;
};

// Smallest C such that
//   (1+|x-xi_i|)^{-a}(1+|x-xi_j|)^{-b}
//     <= C |xi_i-xi_j|^{-s} [ (1+|x-xi_i|)^{-(a+b-s)} + (1+|x-xi_j|)^{-(a+b-s)} ]
// over a seeded heavy-tailed sample; pass when the witness is stable under
// sample doubling (<= 5% growth).
WitnessResult check_two_center_inequality(double a, double b, double s,
                                          const Point& xi_i, const Point& xi_j,
                                          std::int64_t sample_count,
                                          std::uint64_t seed);

// Witness for int |y|^{-mu} (1+|z-y|)^{-(a+eta)} dy <= C (1+|z|)^{-(a-N+mu)},
// evaluated by two-center quadrature at each offset |z|.  pass requires
// stability under quadrature refinement.
WitnessResult check_convolution_bound(double a, double eta, double mu, int N,
                                      const std::vector<double>& offsets,
                                      double tol = 1e-6);

// Far-field decay exponent of the same left-hand side: slope of log LHS
// against log(1+|z|), for comparison with -(a-N+mu).
double convolution_bound_slope(double a, double eta, double mu, int N,
                               const std::vector<double>& offsets,
                               double tol = 1e-6);

// Branch-by-branch witnesses for the scalar inequalities
//   | |a+b|^q - |a|^q |            <= C min(|b|^q, |a|^{q-1}|b|)   (0<q<1)
//                                  <= C (|a|^{q-1}|b| + |b|^q)     (1<=q<=2)
//   | |a+b|^q - |a|^q - q|a|^{q-2}ab | <= C (|a|^{q-2}b^2 + |b|^q) (q>2)
//                                       <= C |b|^q                 (q<=2)
// over heavy-tailed samples of (a, b).  c_first/c_second are the witnesses of
// the two displays (the first is defined only for q <= 2); c_witness is their
// maximum.
struct ElementaryWitness {
  double c_first = 0.0;
  double c_second = 0.0;
  double c_witness = 0.0;
  bool pass = false;
};
ElementaryWitness check_elementary_inequalities(double q,
                                                std::int64_t sample_count,
                                                std::uint64_t seed);

}  // namespace choquard
