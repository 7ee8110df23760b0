#include "choquard/special.hpp"

#include <cmath>
#include <stdexcept>

namespace choquard {

namespace {

// Lanczos g = 7 coefficients (Godfrey's table, 9 terms).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};

double lanczos_series(double z) {
  // z here is the shifted argument: series for Gamma(z+1).
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  return a;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
  if (x < 0.5) {
    // Reflection keeps the series argument away from the poles.
    return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) *
         lanczos_series(z);
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma_fn: requires x > 0");
  if (x < 0.5) {
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma_fn(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_series(z));
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: requires a, b > 0");
  return std::exp(log_gamma_fn(a) + log_gamma_fn(b) - log_gamma_fn(a + b));
}

double zeta_fn(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta_fn: requires s > 1");
  constexpr int M = 32;
  double sum = 0.0;
  for (int n = 1; n < M; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double ms = std::pow(static_cast<double>(M), -s);
  // Euler-Maclaurin tail with Bernoulli terms through B6.
  sum += ms * M / (s - 1.0) + 0.5 * ms;
  sum += s * ms / M / 12.0;
  sum -= s * (s + 1.0) * (s + 2.0) * ms / (M * M * M) / 720.0;
  sum += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * ms /
         (static_cast<double>(M) * M * M * M * M) / 30240.0;
  return sum;
}

double sphere_area(int m) {
  if (m < 0) throw std::domain_error("sphere_area: requires m >= 0");
  // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
  const double half = 0.5 * (m + 1);
  return 2.0 * std::pow(M_PI, half) / gamma_fn(half);
}

double ball_volume(int n) {
  if (n < 1) throw std::domain_error("ball_volume: requires n >= 1");
  return std::pow(M_PI, 0.5 * n) / gamma_fn(0.5 * n + 1.0);
}

}  // namespace choquard
