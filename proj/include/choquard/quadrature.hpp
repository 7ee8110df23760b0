#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "choquard/point.hpp"

namespace choquard {

// Outcome of a quadrature or Monte Carlo evaluation.  abs_error_estimate is a
// one-sided estimate (one standard error for Monte Carlo, accumulated rule
// differences for deterministic cubature).  converged is false when the
// evaluation budget ran out first; the partial result is still returned.
struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;
  bool bias_warning = false;

  // Throws std::runtime_error when the budget was exhausted before reaching
  // the requested tolerance.
  const QuadratureResult& require() const;
};

inline constexpr std::int64_t kDefaultBudget = 10'000'000;

// omega_{N-1} int_0^inf f(rho) rho^{N-1} drho, i.e. the integral over R^N of
// the radial profile f.  Adaptive Gauss-Kronrod 7-15 on [0,1] plus a
// rho -> 1/rho transformed tail.  tol is relative with an absolute floor.
// feature_scale, when positive, pre-grades the subdivision geometrically down
// to that length so that integrand structure much finer than the domain (a
// bubble of width 1/lambda, a kernel singularity) is straddled by cell
// boundaries before adaptive refinement starts; otherwise sharp peaks can sit
// between cubature nodes and be missed entirely.
QuadratureResult integrate_radial(const std::function<double(double)>& f, int N,
                                  double tol,
                                  std::int64_t budget = kDefaultBudget,
                                  double feature_scale = 0.0);

// int_{R^N} g(|x-a|, |x-b|) dx via the bipolar reduction: for s = |x-a|,
// t = |x-b|, d = |a-b| the level set {s, t fixed} is an (N-2)-sphere of radius
// rho(s,t) and
//   dx = |S^{N-2}| (s t / d) rho^{N-3} ds dt   on  |s-t| <= d <= s+t.
// The (s,t) strip is mapped to a box with s axis-aligned so that radial
// singularities and cut-offs in s or t are resolved by bisection.
QuadratureResult integrate_two_center(
    const std::function<double(double, double)>& g, const Point& a,
    const Point& b, int N, double tol, std::int64_t budget = kDefaultBudget,
    double feature_scale = 0.0);

// int_{R^N} g(|x-a|, |x-b|, |x-c|) dx for centers spanning (at most) a plane:
// two in-plane coordinates plus the orthogonal radius with an (N-3)-sphere
// factor give a 3D integral.  Duplicate centers fall back to the two-center
// reduction.
QuadratureResult integrate_three_center(
    const std::function<double(double, double, double)>& g, const Point& a,
    const Point& b, const Point& c, int N, double tol,
    std::int64_t budget = kDefaultBudget, double feature_scale = 0.0);

// One importance-sampling stratum: a multivariate Cauchy bump of the given
// scale around center.  Strata are combined as an equal-weight mixture, with
// samples drawn stratum by stratum (stratified over mixture components).
struct McStratum {
  Point center;
  double scale = 1.0;
};

// Unbiased stratified importance-sampling estimate of int_{R^N} f.  The
// estimate is deterministic for a fixed seed; abs_error_estimate is one
// combined standard error.
QuadratureResult monte_carlo_stratified(
    const std::function<double(const Point&)>& f,
    const std::vector<McStratum>& strata, std::int64_t samples_per_stratum,
    std::uint64_t seed);

// Density of the equal-weight Cauchy mixture (used by the estimator and
// exposed for tests).
double mc_mixture_density(const std::vector<McStratum>& strata, const Point& x);

// Unbiased estimate of the double convolution
//   int int F(y) G(x) |x - y|^{-mu} dx dy,   0 < mu < N.
// y is drawn from the strata_y mixture; x from an equal mixture of the
// strata_x components and a kernel-adapted radial density around y whose
// |u|^{-mu} profile cancels the kernel singularity, keeping the variance
// finite even for mu > N/2.
QuadratureResult mc_double_convolution(
    const std::function<double(const Point&)>& F,
    const std::function<double(const Point&)>& G, double mu,
    const std::vector<McStratum>& strata_y,
    const std::vector<McStratum>& strata_x, double kernel_scale,
    std::int64_t samples, std::uint64_t seed);

}  // namespace choquard
