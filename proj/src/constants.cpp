#include "choquard/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "choquard/special.hpp"

namespace choquard {

double radial_integral(int N, double p) {
  if (N < 1) throw std::domain_error("radial_integral: requires N >= 1");
  if (!(2.0 * p > N))
    throw std::domain_error("radial_integral: divergent, requires 2p > N");
  // Evaluated in log space; Gamma(p) overflows already for moderate p.
  const double lg = 0.5 * N * std::log(M_PI) + log_gamma_fn(p - 0.5 * N) -
                    log_gamma_fn(p);
  return std::exp(lg);
}

double hls_constant(const ProblemParams& params) {
  const int N = params.N;
  const double mu = params.mu;
  if (!(mu > 0.0) || !(mu < N))
    throw std::domain_error("hls_constant: requires 0 < mu < N");
  const double lg = 0.5 * mu * std::log(M_PI) + log_gamma_fn(0.5 * (N - mu)) -
                    log_gamma_fn(N - 0.5 * mu) +
                    (-1.0 + mu / N) * (log_gamma_fn(0.5 * N) - log_gamma_fn(N));
  return std::exp(lg);
}

double riesz_factor(int N, double s) {
  if (!(s > 0.0) || !(s < 0.5 * N))
    throw std::domain_error("riesz_factor: requires 0 < s < N/2");
  const double lg = 0.5 * N * std::log(M_PI) + log_gamma_fn(0.5 * (N - 2.0 * s)) -
                    log_gamma_fn(N - s);
  return std::exp(lg);
}

double alpha_coeff(const ProblemParams& params) {
  const int N = params.N;
  const double mu = params.mu;
  // The amplitude is fixed by requiring zero residual in
  //   -Delta U = (|x|^{-mu} * U^{2*_mu}) U^{2*_mu - 1},
  // which reads N(N-2) alpha = I(mu/2) alpha^{2 · 2*_mu - 1}.
  const double expo = (N - 2.0) / (2.0 * (N - mu + 2.0));
  const double base = N * (N - 2.0) / riesz_factor(N, 0.5 * mu);
  return std::pow(base, expo);
}

double sobolev_constant(const ProblemParams& params) {
  const int N = params.N;
  const double mu = params.mu;
  // Back-solved from alpha = S^{(N-mu)(2-N)/(4(N-mu+2))} C(N,mu)^{(2-N)/(2(N-mu+2))}
  // (N(N-2))^{(N-2)/4} with alpha as above; simplifies to
  // S = N(N-2) (I(mu/2)/C(N,mu))^{2/(N-mu)}.
  const double ratio = riesz_factor(N, 0.5 * mu) / hls_constant(params);
  return N * (N - 2.0) * std::pow(ratio, 2.0 / (N - mu));
}

double i_alpha_m(double alpha, double m) {
  if (!(alpha > -1.0))
    throw std::domain_error("i_alpha_m: requires alpha > -1");
  if (!(alpha + 1.0 < 2.0 * m))
    throw std::domain_error("i_alpha_m: divergent, requires alpha + 1 < 2m");
  const double a = 0.5 * (alpha + 1.0);
  return 0.5 * beta_fn(a, m - a);
}

double b0_geometric(int N) {
  if (N < 5) throw std::domain_error("b0_geometric: requires N >= 5");
  const double s = static_cast<double>(N - 2);
  return 2.0 * zeta_fn(s) / std::pow(2.0 * M_PI, s);
}

EnergyConstants energy_constants(const ProblemParams& params) {
  const int N = params.N;
  const double two_star = params.two_star_mu;

  EnergyConstants c;
  c.dimension = N;
  c.mu = params.mu;
  c.alpha = alpha_coeff(params);
  c.riesz_factor = riesz_factor(N, 0.5 * params.mu);
  c.d_frak = std::pow(c.alpha, two_star) * c.riesz_factor;
  const double j_n = radial_integral(N, static_cast<double>(N));
  const double j_np1 = radial_integral(N, N + 1.0);
  const double j_half = radial_integral(N, 0.5 * (N + 2.0));
  c.c_big = c.d_frak * std::pow(c.alpha, two_star) * j_n;
  c.d_big = c.d_frak * std::pow(c.alpha, two_star) * j_half;
  c.a_const = 0.5 * (1.0 - 1.0 / two_star) * c.c_big;
  c.b1 = 0.5 * c.alpha * c.alpha * radial_integral(N, N - 2.0);
  c.b2 = 0.5 * c.d_big;
  c.c1_grad = 2.0 * j_np1 - j_n;  // exactly zero: J_{N+1} = J_N / 2
  c.c2 = j_half;
  c.c1_half = -(N - 2.0) / (N + 2.0) * c.c2;
  c.b0_geom = b0_geometric(N);
  c.hls = hls_constant(params);
  c.sobolev_s = sobolev_constant(params);
  return c;
}

}  // namespace choquard
