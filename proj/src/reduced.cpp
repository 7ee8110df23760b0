#include "choquard/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace choquard {

double sine_sum(int k, double r, int N) {
  if (k < 2) throw std::invalid_argument("sine_sum: requires k >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("sine_sum: requires r > 0");
  const double p = static_cast<double>(N - 2);
  double T;
  if (k % 2 == 0) {
    T = 1.0;  // m = k/2 term, cosec(pi/2)
    for (int m = 1; m < k / 2; ++m)
      T += 2.0 * std::pow(std::sin(M_PI * m / k), -p);
  } else {
    T = 0.0;
    for (int m = 1; m <= (k - 1) / 2; ++m)
      T += 2.0 * std::pow(std::sin(M_PI * m / k), -p);
  }
  return T * std::pow(2.0 * r, -p);
}

double lambda_scaling_exponent(int N) {
  if (N <= 4) throw std::domain_error("lambda_scaling_exponent: N > 4 required");
  return (N - 2.0) / (N - 4.0);
}

namespace {

// Interaction coefficient of the lambda^{-(N-2)} term: the exact sine sum, or
// its large-k asymptote B2 * b0_geom * k^{N-2} / r^{N-2}.
double interaction_sum(int k, double r, int N, const EnergyConstants& consts,
                       bool asymptotic) {
  if (k < 2) return 0.0;
  if (asymptotic)
    return consts.b0_geom * std::pow(static_cast<double>(k), N - 2.0) /
           std::pow(r, N - 2.0);
  return sine_sum(k, r, N);
}

}  // namespace

double reduced_F(int k, double r, double lambda,
                 const RadialPotential& potential, const EnergyConstants& consts,
                 bool asymptotic) {
  if (!(lambda > 0.0)) throw std::invalid_argument("reduced_F: lambda > 0");
  const int N = consts.dimension;
  const double S = interaction_sum(k, r, N, consts, asymptotic);
  return k * (consts.a_const + consts.b1 * potential.value(r) / (lambda * lambda) -
              consts.b2 * std::pow(lambda, -(N - 2.0)) * S);
}

double reduced_F_dlambda(int k, double r, double lambda,
                         const RadialPotential& potential,
                         const EnergyConstants& consts, bool asymptotic) {
  if (!(lambda > 0.0)) throw std::invalid_argument("reduced_F_dlambda: lambda > 0");
  const int N = consts.dimension;
  const double S = interaction_sum(k, r, N, consts, asymptotic);
  return k * (-2.0 * consts.b1 * potential.value(r) / (lambda * lambda * lambda) +
              (N - 2.0) * consts.b2 * std::pow(lambda, -(N - 1.0)) * S);
}

double reduced_F_dr(int k, double r, double lambda,
                    const RadialPotential& potential,
                    const EnergyConstants& consts, bool asymptotic) {
  const int N = consts.dimension;
  const double S = interaction_sum(k, r, N, consts, asymptotic);
  // S(r) scales as r^{-(N-2)} in both variants, so S'(r) = -(N-2) S / r.
  return k * (consts.b1 * potential.derivative(r) / (lambda * lambda) +
              (N - 2.0) * consts.b2 * std::pow(lambda, -(N - 2.0)) * S / r);
}

void reduced_F_hessian(int k, double r, double lambda,
                       const RadialPotential& potential,
                       const EnergyConstants& consts, double hess[3],
                       bool asymptotic) {
  const int N = consts.dimension;
  const double S = interaction_sum(k, r, N, consts, asymptotic);
  const double b1 = consts.b1, b2 = consts.b2;
  const double v = potential.value(r), dv = potential.derivative(r),
               ddv = potential.second_derivative(r);
  const double lm = lambda;
  // d2F/dr2
  hess[0] = k * (b1 * ddv / (lm * lm) -
                 (N - 2.0) * (N - 1.0) * b2 * std::pow(lm, -(N - 2.0)) * S / (r * r));
  // d2F/dr dlambda
  hess[1] = k * (-2.0 * b1 * dv / (lm * lm * lm) -
                 (N - 2.0) * (N - 2.0) * b2 * std::pow(lm, -(N - 1.0)) * S / r);
  // d2F/dlambda2
  hess[2] = k * (6.0 * b1 * v / (lm * lm * lm * lm) -
                 (N - 1.0) * (N - 2.0) * b2 * std::pow(lm, -static_cast<double>(N)) * S);
}

LambdaStar lambda_star(double r, int k, const RadialPotential& potential,
                       const EnergyConstants& consts) {
  const int N = consts.dimension;
  const double v = potential.value(r);
  if (!(v > 0.0))
    throw std::domain_error("lambda_star: requires V(r) > 0");
  LambdaStar out;
  const double combined_b0 = consts.b2 * consts.b0_geom;
  out.Lambda0 = std::pow(
      combined_b0 * (N - 2.0) / (2.0 * consts.b1 * v * std::pow(r, N - 2.0)),
      1.0 / (N - 4.0));
  out.lambda_asymptotic = out.Lambda0 * std::pow(k, lambda_scaling_exponent(N));

  // Newton in log(lambda) on the exact-sum dF/dlambda from the asymptotic
  // start; the scaled gradient G = lambda^3 dF/dlambda / k stays O(1)-ish
  // while the raw lambda-curvature underflows for large k.
  double lm = out.lambda_asymptotic;
  if (k >= 2) {
    const double s = sine_sum(k, r, N);
    for (int it = 0; it < 100; ++it) {
      const double g = -2.0 * consts.b1 * v +
                       (N - 2.0) * consts.b2 * s * std::pow(lm, -(N - 4.0));
      const double dg_dlog =
          -(N - 4.0) * (N - 2.0) * consts.b2 * s * std::pow(lm, -(N - 4.0));
      if (dg_dlog == 0.0) break;
      double step = -g / dg_dlog;
      step = std::clamp(step, -0.25, 0.25);
      lm *= std::exp(step);
      if (std::abs(step) <= 1e-15) break;
    }
  }
  out.lambda_refined = lm;
  return out;
}

double ridge_profile_exponent(int N) { return (N - 2.0) / (N - 4.0); }

double ridge_b_prime(int N, const EnergyConstants& consts) {
  const double combined_b0 = consts.b2 * consts.b0_geom;
  const double e = 2.0 / (N - 4.0);
  return (N - 4.0) / (N - 2.0) * std::pow(2.0 / (N - 2.0), e) *
         std::pow(std::pow(consts.b1, N - 2.0) / (combined_b0 * combined_b0),
                  1.0 / (N - 4.0));
}

double along_ridge_profile(double r, int k, const RadialPotential& potential,
                           const EnergyConstants& consts) {
  const int N = consts.dimension;
  const double v = potential.value(r);
  if (!(v > 0.0))
    throw std::domain_error("along_ridge_profile: requires V(r) > 0");
  const LambdaStar ls = lambda_star(r, k, potential, consts);
  const double lm = ls.lambda_asymptotic;
  const double combined_b0 = consts.b2 * consts.b0_geom;
  return consts.b1 * v / (lm * lm) -
         combined_b0 * std::pow(static_cast<double>(k), N - 2.0) /
             (std::pow(lm, N - 2.0) * std::pow(r, N - 2.0));
}

ReducedEnergyDomain make_domain(int N, int k, double r0, double delta,
                                double theta) {
  if (!(r0 > 0.0) || !(delta > 0.0) || !(delta < r0))
    throw std::invalid_argument("make_domain: requires 0 < delta < r0");
  ReducedEnergyDomain d;
  d.r_lo = r0 - delta;
  d.r_hi = r0 + delta;
  d.theta = theta;
  d.delta1 = std::pow(static_cast<double>(k),
                      -1.5 * theta * lambda_scaling_exponent(N));
  return d;
}

namespace {

// Exact-sum ridge value max_lambda [B1 V(r)/lambda^2 - B2 S(r) lambda^{-(N-2)}].
double exact_ridge_value(double r, int k, const RadialPotential& potential,
                         const EnergyConstants& consts, int N) {
  const double W = consts.b1 * potential.value(r);
  const double Q = consts.b2 * sine_sum(k, r, N);
  const double e = 2.0 / (N - 4.0);
  return (N - 4.0) / (N - 2.0) * std::pow(2.0 / (N - 2.0), e) *
         std::pow(std::pow(W, N - 2.0) / (Q * Q), 1.0 / (N - 4.0));
}

struct GridBest {
  double r = 0.0, lambda = 0.0, F = 0.0;
};

}  // namespace

CriticalPoint find_critical_point(CriticalCase which, int k,
                                  const RadialPotential& potential,
                                  const ReducedEnergyDomain& domain,
                                  const EnergyConstants& consts, double eta) {
  const int N = consts.dimension;
  if (k < 2)
    throw std::invalid_argument("find_critical_point: requires k >= 2");

  // Hypothesis check: an isolated interior extremum of P(r) = r^2 V(r) of the
  // requested type, with V positive there.
  const int ngrid = 4001;
  const double r_lo = domain.r_lo, r_hi = domain.r_hi;
  int best_idx = 0;
  double best_val = potential.profile(r_lo);
  const bool want_max = (which == CriticalCase::max);
  for (int i = 1; i < ngrid; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (ngrid - 1);
    const double p = potential.profile(r);
    if (want_max ? (p > best_val) : (p < best_val)) {
      best_val = p;
      best_idx = i;
    }
  }
  if (best_idx == 0 || best_idx == ngrid - 1)
    throw HypothesisError(
        want_max ? "r^2 V(r) has no interior maximum in [r_lo, r_hi]"
                 : "r^2 V(r) has no interior minimum in [r_lo, r_hi]");
  const double r_ext = r_lo + (r_hi - r_lo) * best_idx / (ngrid - 1);
  if (!(potential.value(r_ext) > 0.0))
    throw HypothesisError("V vanishes at the profile extremum");

  // Start from the profile extremum on the ridge, then refine a coarse grid
  // scan of F over the domain (max case only; the saddle start is the ridge).
  double r0 = r_ext;
  double lm0 = lambda_star(r0, k, potential, consts).lambda_refined;
  if (which == CriticalCase::max) {
    GridBest gb{r0, lm0, reduced_F(k, r0, lm0, potential, consts)};
    const int nr = 41, nl = 21;
    for (int i = 0; i <= nr; ++i) {
      const double r = r_lo + (r_hi - r_lo) * i / nr;
      const LambdaStar ls = lambda_star(r, k, potential, consts);
      for (int j = 0; j <= nl; ++j) {
        const double Lam = ls.Lambda0 - domain.delta1 +
                           2.0 * domain.delta1 * j / nl;
        if (!(Lam > 0.0)) continue;
        const double lm = Lam * std::pow(k, lambda_scaling_exponent(N));
        const double F = reduced_F(k, r, lm, potential, consts);
        if (F > gb.F) gb = {r, lm, F};
      }
    }
    r0 = gb.r;
    lm0 = gb.lambda;
  }

  // Newton on grad F = 0 in the scaled variables (r, log lambda).  The raw
  // lambda-curvature scales like lambda^{-4} and underflows against the
  // r-block for large k; the log variable keeps the Hessian balanced and its
  // signature is unchanged by the reparametrization.
  double r = r0, lm = lm0;
  for (int it = 0; it < 200; ++it) {
    const double gr = reduced_F_dr(k, r, lm, potential, consts);
    const double gl = reduced_F_dlambda(k, r, lm, potential, consts) * lm;
    double h[3];
    reduced_F_hessian(k, r, lm, potential, consts, h);
    const double hrr = h[0];
    const double hrl = h[1] * lm;
    const double hll = h[2] * lm * lm + gl;  // d2F/dL2, L = log lambda
    const double det = hrr * hll - hrl * hrl;
    if (det == 0.0) break;
    double dr_step = -(hll * gr - hrl * gl) / det;
    double dl_step = -(-hrl * gr + hrr * gl) / det;
    dr_step = std::clamp(dr_step, -0.2 * (r_hi - r_lo), 0.2 * (r_hi - r_lo));
    dl_step = std::clamp(dl_step, -0.2, 0.2);
    r += dr_step;
    lm *= std::exp(dl_step);
    r = std::clamp(r, r_lo - 0.5 * (r_hi - r_lo), r_hi + 0.5 * (r_hi - r_lo));
    if (std::abs(dr_step) <= 1e-14 * std::max(1.0, std::abs(r)) &&
        std::abs(dl_step) <= 1e-14)
      break;
  }

  const double nu = lambda_scaling_exponent(N);
  const double Lambda = lm / std::pow(k, nu);
  const double Lambda0_here = lambda_star(r, k, potential, consts).Lambda0;
  if (r <= r_lo || r >= r_hi || std::abs(Lambda - Lambda0_here) >= domain.delta1)
    throw HypothesisError("critical point escaped to the domain boundary");

  CriticalPoint out;
  out.r_star = r;
  out.lambda_star = lm;
  out.Lambda_star = Lambda;
  out.F_star = reduced_F(k, r, lm, potential, consts);
  {
    const double gr = reduced_F_dr(k, r, lm, potential, consts);
    const double gl = reduced_F_dlambda(k, r, lm, potential, consts);
    out.grad_norm = std::hypot(gr, gl) * lm * lm / (k * consts.a_const);
  }
  // Eigenvalues of the (r, log lambda) Hessian.
  double h[3];
  reduced_F_hessian(k, r, lm, potential, consts, h);
  const double hrr = h[0];
  const double hrl = h[1] * lm;
  const double hll =
      h[2] * lm * lm + reduced_F_dlambda(k, r, lm, potential, consts) * lm;
  const double tr = hrr + hll;
  const double disc =
      std::sqrt(std::max(0.0, 0.25 * tr * tr - (hrr * hll - hrl * hrl)));
  out.hess_eig_lo = 0.5 * tr - disc;
  out.hess_eig_hi = 0.5 * tr + disc;

  const bool is_max = out.hess_eig_lo < 0.0 && out.hess_eig_hi < 0.0;
  const bool is_saddle = out.hess_eig_lo < 0.0 && out.hess_eig_hi > 0.0;
  if (which == CriticalCase::max) {
    if (!is_max)
      throw ClassificationError("expected a local maximum, Hessian disagrees");
    out.classification = "max";
  } else {
    if (!is_saddle)
      throw ClassificationError("expected a saddle, Hessian disagrees");
    out.classification = "saddle";
    SaddleBracket br;
    br.eta = eta;
    br.b_prime = ridge_b_prime(N, consts);
    br.level = -out.F_star;
    br.alpha2 = k * (-consts.a_const + eta);
    // alpha1 separates the boundary values of -F from the critical level:
    // the (1 - eta)-deflated smaller of the two boundary ridge heights.
    const double ridge_bdry = std::min(
        exact_ridge_value(r_lo, k, potential, consts, N),
        exact_ridge_value(r_hi, k, potential, consts, N));
    br.alpha1 = k * (-consts.a_const - (1.0 - eta) * ridge_bdry);
    out.bracket = br;
    out.has_bracket = true;
  }
  return out;
}

}  // namespace choquard
