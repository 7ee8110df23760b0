#pragma once

#include <utility>
#include <vector>

#include "choquard/constants.hpp"
#include "choquard/params.hpp"
#include "choquard/point.hpp"

namespace choquard {

// Admissible concentration window lambda in [L0 k^e, L1 k^e], e = (N-2)/(N-4).
struct LambdaWindow {
  double L0 = 0.0;
  double L1 = 0.0;
  double exponent = 0.0;

  LambdaWindow(int N, double l0, double l1);
  double lo(int k) const;
  double hi(int k) const;
  bool contains(double lambda, int k) const;
};

// Polygon multi-bubble configuration: k bubbles of concentration lambda at the
// vertices of a regular k-gon of radius r in the (x1, x2) plane.
struct BubbleConfig {
  ProblemParams params;
  int k = 1;
  double r = 1.0;
  double lambda = 1.0;
  double alpha = 0.0;  // bubble amplitude alpha_{N,mu}
  std::vector<Point> centers;

  BubbleConfig(const ProblemParams& p, int k_in, double r_in, double lambda_in);
};

// Vertices xi_j = (r cos(2(j-1)pi/k), r sin(2(j-1)pi/k), 0, ..., 0), j = 1..k.
std::vector<Point> polygon_centers(int N, int k, double r);

// JSON round trip of the defining fields {N, mu, k, r, lambda}; the centers
// and amplitude are derived on construction.
std::string bubble_config_to_json(const BubbleConfig& config);
BubbleConfig bubble_config_from_json(const std::string& text);

// U_{lambda,xi}(x) = alpha lambda^{(N-2)/2} / (1 + lambda^2 |x-xi|^2)^{(N-2)/2}
double bubble_eval(const ProblemParams& params, double alpha, double lambda,
                   const Point& xi, const Point& x);

// Sum of all k bubbles at x.
double ansatz_eval(const BubbleConfig& config, const Point& x);

// Per-bubble contributions U_{lambda,xi_j}(x), j = 1..k.
std::vector<double> ansatz_components(const BubbleConfig& config, const Point& x);

// (psi_{j,lambda,1}, psi_{j,lambda,2}) = (dU_{lambda,xi_j}/dr, dU_{lambda,xi_j}/dlambda).
// The r-derivative moves only the single center xi_j(r) radially; the
// lambda-derivative has the closed form
//   alpha (N-2)/2 lambda^{(N-4)/2} (1 - lambda^2|x-xi_j|^2) / (1+lambda^2|x-xi_j|^2)^{N/2}.
std::pair<double, double> psi_derivatives(const BubbleConfig& config, int j,
                                          const Point& x);

// Kernel of the linearized operator at the standard bubble (lambda = 1, xi = 0):
// Z_i = dU/dx_i for i = 1..N and Z_{N+1} = (N-2)/2 U + x . grad U.
double kernel_eval(const ProblemParams& params, double alpha, int i,
                   const Point& x);

// Angular sector around bubble j: x in Omega_j iff <x'/|x'|, xi_j'/|xi_j'|> >= cos(pi/k).
// Boundary ties (and x' = 0) go to the smallest qualifying index, so the k
// sectors partition R^N exactly.
struct SectorDomain {
  int index = 1;  // 1-based
  const BubbleConfig* config = nullptr;

  SectorDomain(int j, const BubbleConfig& c);
};

bool sector_contains(const SectorDomain& domain, const Point& x);

}  // namespace choquard
