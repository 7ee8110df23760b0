#include <doctest.h>

#include <cmath>
#include <random>

#include "choquard/reduced.hpp"

#include "oracle.hpp"

using namespace choquard;

TEST_SUITE_BEGIN("reduced");

namespace {

std::mt19937_64 g_gen(61);
double uni() { return (g_gen() >> 11) * (1.0 / 9007199254740992.0); }

const ProblemParams params54(5, 4.0);
const EnergyConstants consts54 = energy_constants(params54);

RadialPotential default_bump() {
  return RadialPotential::gaussian_bump(0.1, 1.0, 1.0, 0.2);
}

RadialPotential default_well() {
  return RadialPotential::gaussian_well(0.05, 1.0, 1.0, 0.2);
}

}  // namespace

TEST_CASE("sine sum") {
  // k = 2: (2r)^{-(N-2)}.
  CHECK(sine_sum(2, 1.5, 5) == doctest::Approx(std::pow(3.0, -3.0)).epsilon(1e-14));
  // k = 3, r = 1: 2 (sqrt 3)^{-(N-2)}.
  CHECK(sine_sum(3, 1.0, 5) ==
        doctest::Approx(2.0 * std::pow(std::sqrt(3.0), -3.0)).epsilon(1e-13));
  CHECK(sine_sum(3, 1.0, 6) ==
        doctest::Approx(2.0 * std::pow(std::sqrt(3.0), -4.0)).epsilon(1e-13));
  // Direct summation cross-check (no even/odd split).
  for (int k : {5, 8, 13}) {
    double direct = 0.0;
    for (int j = 2; j <= k; ++j)
      direct += std::pow(2.0 * 1.2 * std::sin(M_PI * (j - 1) / k), -3.0);
    CHECK(sine_sum(k, 1.2, 5) == doctest::Approx(direct).epsilon(1e-14));
  }
  // k = 4096: k^{-3} sine_sum approaches B0 within 1e-4 relative.
  CHECK(sine_sum(4096, 1.0, 5) / std::pow(4096.0, 3.0) ==
        doctest::Approx(b0_geometric(5)).epsilon(1e-4));
  CHECK_THROWS_AS(sine_sum(1, 1.0, 5), std::invalid_argument);
}

TEST_CASE("reduced F: limits and monotonicity") {
  const RadialPotential bump = default_bump();
  const int k = 8;
  // lambda -> infinity: F/k -> A.
  CHECK(reduced_F(k, 1.0, 1e9, bump, consts54) / k ==
        doctest::Approx(consts54.a_const).epsilon(1e-12));
  // V = 0: F strictly increasing in lambda.
  const RadialPotential v0 = RadialPotential::constant(0.0);
  double prev = reduced_F(k, 1.0, 10.0, v0, consts54);
  for (double lam : {20.0, 40.0, 80.0, 160.0}) {
    const double cur = reduced_F(k, 1.0, lam, v0, consts54);
    CHECK(cur > prev);
    prev = cur;
  }
  for (double lam : {10.0, 100.0})
    CHECK(reduced_F_dlambda(k, 1.0, lam, v0, consts54) > 0.0);
  // Exact vs asymptotic interaction at k = 64 agree within 5%.
  {
    const int kk = 64;
    const double lam = 100.0;
    const double exact_int = consts54.a_const * kk - reduced_F(kk, 1.0, lam, v0, consts54);
    const double asym_int =
        consts54.a_const * kk - reduced_F(kk, 1.0, lam, v0, consts54, true);
    CHECK(exact_int / asym_int == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("reduced F derivative vs finite differences") {
  const RadialPotential bump = default_bump();
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(uni() * 14);
    const double r = 0.8 + 0.4 * uni();
    const double lam = 20.0 + 400.0 * uni();
    const double fd = oracle::reduced_G_dlambda_fd(
        k, r, lam, bump.value(r), consts54.b1, consts54.b2, 5);
    const double an = reduced_F_dlambda(k, r, lam, bump, consts54);
    CHECK(std::abs(an - fd) <= 1e-8 * std::max(std::abs(an), std::abs(fd)));
    // And F itself agrees with the extended-precision formula.
    const double g_ld = static_cast<double>(oracle::reduced_G_ld(
        k, r, lam, bump.value(r), consts54.b1, consts54.b2, 5));
    CHECK(reduced_F(k, r, lam, bump, consts54) - k * consts54.a_const ==
          doctest::Approx(g_ld).epsilon(1e-11));
  }
  // r derivative too.
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 4;
    const double r = 0.9 + 0.2 * uni();
    const double lam = 50.0 + 100.0 * uni();
    const double h = 1e-6;
    const double fd = (reduced_F(k, r + h, lam, bump, consts54) -
                       reduced_F(k, r - h, lam, bump, consts54)) /
                      (2.0 * h);
    const double an = reduced_F_dr(k, r, lam, bump, consts54);
    CHECK(an == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("dF/dlambda changes sign across the ridge") {
  const RadialPotential bump = default_bump();
  const int k = 8;
  const double r = 1.0;
  const LambdaStar ls = lambda_star(r, k, bump, consts54);
  CHECK(reduced_F_dlambda(k, r, 0.8 * ls.lambda_refined, bump, consts54) > 0.0);
  CHECK(reduced_F_dlambda(k, r, 1.2 * ls.lambda_refined, bump, consts54) < 0.0);
  // The refined root is a strict maximum along lambda.
  const double f0 = reduced_F(k, r, ls.lambda_refined, bump, consts54);
  const double eps = 1e-3 * ls.lambda_refined;
  CHECK(reduced_F(k, r, ls.lambda_refined + eps, bump, consts54) < f0);
  CHECK(reduced_F(k, r, ls.lambda_refined - eps, bump, consts54) < f0);
}

TEST_CASE("lambda_star closed form and scaling") {
  // Contrived constants with B0(N-2)/(2 B1 V r^{N-2}) = 1: Lambda0 = 1.
  EnergyConstants c = consts54;
  const double r = 1.0;
  const RadialPotential v = RadialPotential::constant(
      c.b2 * c.b0_geom * 3.0 / (2.0 * c.b1));
  const LambdaStar ls = lambda_star(r, 12, v, c);
  CHECK(ls.Lambda0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ls.lambda_asymptotic == doctest::Approx(std::pow(12.0, 3.0)).epsilon(1e-12));

  // Scaling: V -> 4V divides Lambda0 by 4^{1/(N-4)}.
  const RadialPotential bump = default_bump();
  const LambdaStar a = lambda_star(1.0, 8, bump, consts54);
  const RadialPotential bump4 = RadialPotential::gaussian_bump(0.4, 4.0, 1.0, 0.2);
  const LambdaStar b = lambda_star(1.0, 8, bump4, consts54);
  CHECK(b.Lambda0 == doctest::Approx(a.Lambda0 / 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(lambda_star(1.0, 8, RadialPotential::constant(0.0), consts54),
                  std::domain_error);
}

TEST_CASE("along-ridge profile") {
  const RadialPotential bump = default_bump();
  const int k = 16;
  const double e = ridge_profile_exponent(5);
  CHECK(e == doctest::Approx(3.0));
  // The ratio profile / (r^2 V)^{(N-2)/(N-4)} is r-independent.
  double ratio0 = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.85 + 0.3 * i / 19.0;
    const double prof = along_ridge_profile(r, k, bump, consts54);
    const double ratio = prof / std::pow(bump.profile(r), e);
    if (i == 0)
      ratio0 = ratio;
    else
      CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-10));
  }
  // And equals B' k^{-2(N-2)/(N-4)}.
  const double bprime = ridge_b_prime(5, consts54);
  CHECK(bprime > 0.0);
  CHECK(ratio0 == doctest::Approx(bprime * std::pow(16.0, -6.0)).epsilon(1e-10));
  // Doubling k scales by 2^{-2(N-2)/(N-4)}.
  const double p1 = along_ridge_profile(1.0, 16, bump, consts54);
  const double p2 = along_ridge_profile(1.0, 32, bump, consts54);
  CHECK(p2 / p1 == doctest::Approx(std::pow(2.0, -6.0)).epsilon(1e-10));
}

TEST_CASE("exact and asymptotic variants converge in k") {
  // Relative difference of the interaction term decays like k^{-(N-3)} up to
  // the logarithmic correction of the N = 5 sine sum; fitted over k in
  // [16, 256] the slope is within 0.3 of -(N-3) = -2.
  std::vector<std::pair<double, double>> pts;
  for (int k : {16, 32, 64, 128, 256}) {
    const double exact = sine_sum(k, 1.0, 5);
    const double asym = b0_geometric(5) * std::pow(static_cast<double>(k), 3.0);
    pts.emplace_back(std::log(static_cast<double>(k)),
                     std::log(std::abs(exact - asym) / asym));
  }
  const double slope = oracle::fit_slope(pts);
  CHECK(std::abs(slope - (-2.0)) <= 0.3);
}

TEST_CASE("find_critical_point: maximum case") {
  const RadialPotential bump = default_bump();
  const int k = 64;
  // Grid-search oracle for the argmax of the profile r^2 V(r).
  double rc = 0.0, best = -1.0;
  for (int i = 0; i <= 40000; ++i) {
    const double r = 0.9 + 0.2 * i / 40000.0;
    const double p = bump.profile(r);
    if (p > best) {
      best = p;
      rc = r;
    }
  }
  const ReducedEnergyDomain dom = make_domain(5, k, rc, 0.1 * rc);
  const CriticalPoint cp =
      find_critical_point(CriticalCase::max, k, bump, dom, consts54);
  CHECK(cp.classification == "max");
  CHECK(std::abs(cp.r_star - rc) <= 0.05 * (0.1 * rc));
  CHECK(cp.grad_norm <= 1e-9);
  CHECK(cp.hess_eig_hi < 0.0);
  // 2D grid oracle: F at the returned point beats a coarse grid.
  double grid_best = -1e300;
  for (int i = 0; i <= 30; ++i) {
    const double r = dom.r_lo + (dom.r_hi - dom.r_lo) * i / 30.0;
    const LambdaStar ls = lambda_star(r, k, bump, consts54);
    for (int j = 0; j <= 30; ++j) {
      const double lam =
          ls.lambda_refined * (0.8 + 0.4 * j / 30.0);
      grid_best = std::max(grid_best, reduced_F(k, r, lam, bump, consts54));
    }
  }
  CHECK(cp.F_star >= grid_best - 1e-12 * std::abs(grid_best));
}

TEST_CASE("find_critical_point: saddle case with level bracket") {
  const RadialPotential well = default_well();
  const int k = 64;
  double rc = 0.0, best = 1e300;
  for (int i = 0; i <= 40000; ++i) {
    const double r = 0.9 + 0.2 * i / 40000.0;
    const double p = well.profile(r);
    if (p < best) {
      best = p;
      rc = r;
    }
  }
  const ReducedEnergyDomain dom = make_domain(5, k, rc, 0.1 * rc);
  const CriticalPoint cp =
      find_critical_point(CriticalCase::saddle, k, well, dom, consts54);
  CHECK(cp.classification == "saddle");
  CHECK(cp.hess_eig_lo < 0.0);
  CHECK(cp.hess_eig_hi > 0.0);
  CHECK(cp.grad_norm <= 1e-9);
  CHECK(cp.has_bracket);
  CHECK(cp.bracket.alpha1 < cp.bracket.level);
  CHECK(cp.bracket.level < cp.bracket.alpha2);
  CHECK(cp.bracket.b_prime > 0.0);
  // The negation -F has the mirrored signature at the same point.
  CHECK(cp.bracket.level == doctest::Approx(-cp.F_star).epsilon(1e-14));
}

TEST_CASE("find_critical_point: constant potential has no interior extremum") {
  const RadialPotential flat = RadialPotential::constant(0.3);
  const ReducedEnergyDomain dom = make_domain(5, 16, 1.0, 0.1);
  CHECK_THROWS_AS(
      find_critical_point(CriticalCase::max, 16, flat, dom, consts54),
      HypothesisError);
  CHECK_THROWS_AS(
      find_critical_point(CriticalCase::saddle, 16, flat, dom, consts54),
      HypothesisError);
}

TEST_CASE("argmax invariance under potential rescaling") {
  const RadialPotential bump = default_bump();
  const RadialPotential bump4 = RadialPotential::gaussian_bump(0.4, 4.0, 1.0, 0.2);
  const int k = 32;
  const ReducedEnergyDomain dom = make_domain(5, k, 1.0, 0.1);
  const CriticalPoint a = find_critical_point(CriticalCase::max, k, bump, dom, consts54);
  const CriticalPoint b = find_critical_point(CriticalCase::max, k, bump4, dom, consts54);
  // 4V has the same profile argmax; the maximizer in r is unchanged.
  CHECK(a.r_star == doctest::Approx(b.r_star).epsilon(1e-9));
  // Lambda scales by 4^{-1/(N-4)}.
  CHECK(b.Lambda_star == doctest::Approx(a.Lambda_star / 4.0).epsilon(1e-6));
}

TEST_CASE("domain construction") {
  const ReducedEnergyDomain dom = make_domain(5, 64, 1.0, 0.1, 0.05);
  CHECK(dom.r_lo == doctest::Approx(0.9));
  CHECK(dom.r_hi == doctest::Approx(1.1));
  CHECK(dom.delta1 ==
        doctest::Approx(std::pow(64.0, -1.5 * 0.05 * 3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(make_domain(5, 64, 1.0, 1.5), std::invalid_argument);
}

TEST_SUITE_END();
