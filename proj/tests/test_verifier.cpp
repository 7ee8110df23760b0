#include <doctest.h>

#include <cmath>

#include "choquard/verifier.hpp"

using namespace choquard;

TEST_SUITE_BEGIN("verifier");

namespace {

const ProblemParams params54(5, 4.0);
const EnergyConstants consts54 = energy_constants(params54);

}  // namespace

TEST_CASE("weighted norm spec") {
  const WeightedNormSpec star(WeightedNormSpec::Kind::star, 5);
  CHECK(star.exponent == doctest::Approx(2.0));       // (N-2)/2 + 1/2
  CHECK(star.lambda_power == doctest::Approx(-1.5));  // -(N-2)/2
  const WeightedNormSpec ss(WeightedNormSpec::Kind::star_star, 5);
  CHECK(ss.exponent == doctest::Approx(4.0));
  CHECK(ss.lambda_power == doctest::Approx(-3.5));
}

TEST_CASE("weighted norm estimate basics") {
  const BubbleConfig config(params54, 4, 1.0, 8.0);
  const WeightedNormSpec star(WeightedNormSpec::Kind::star, 5);

  // f = the weight itself: the ratio is 1 everywhere, and the estimate is at
  // least the ratio at any center.
  auto fweight = [&](const Point& x) {
    double s = 0.0;
    for (const Point& xi : config.centers)
      s += std::pow(1.0 + config.lambda * dist(x, xi), -star.exponent);
    return std::pow(config.lambda, -star.lambda_power) * s;
  };
  const NormEstimate w = weighted_norm_estimate(fweight, star, config, 2000);
  const double at_center = weighted_ratio(star, config, fweight(config.centers[0]),
                                          config.centers[0]);
  CHECK(at_center == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(w.value >= at_center - 1e-13);
  CHECK(w.value == doctest::Approx(1.0).epsilon(1e-10));

  // f = 0 -> 0.
  const NormEstimate z = weighted_norm_estimate(
      [](const Point&) { return 0.0; }, star, config, 500);
  CHECK(z.value == 0.0);

  // Single-bubble star norm.  The weighted ratio is
  //   alpha (1+u)^{(N-2)/2+tau} (1+u^2)^{-(N-2)/2},  u = lambda |x - xi|,
  // maximized not at the center but at u = (sqrt(17)-3)/2, giving
  // sup = 1.6164... alpha for N = 5, tau = 1/2 (dense-grid oracle agrees).
  const BubbleConfig single(params54, 1, 1.0, 8.0);
  auto fu = [&](const Point& x) {
    return bubble_eval(params54, single.alpha, single.lambda, single.centers[0], x);
  };
  double dense = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double u = 8.0 * i / 200000.0;
    dense = std::max(dense, std::pow(1.0 + u, 2.0) * std::pow(1.0 + u * u, -1.5));
  }
  dense *= single.alpha;
  const NormEstimate nu = weighted_norm_estimate(fu, star, single, 4000);
  CHECK(dense == doctest::Approx(1.61645 * single.alpha).epsilon(1e-4));
  CHECK(nu.value == doctest::Approx(dense).epsilon(1e-4));
  CHECK(nu.value <= dense * (1.0 + 1e-9));
  CHECK(nu.value >= single.alpha * (1.0 - 1e-9));

  // Monotonicity: enlarging the candidate budget never decreases the value.
  const NormEstimate small = weighted_norm_estimate(fu, star, single, 60);
  CHECK(nu.value >= small.value - 1e-15);
}

TEST_CASE("error decay slope: degenerate single bubble") {
  const RadialPotential v0 = RadialPotential::constant(0.0);
  const SlopeFit fit = error_decay_slope(
      1, params54, v0, consts54, 1.0, {64.0, 96.0, 144.0, 216.0}, 80);
  CHECK(fit.degenerate_zero);
}

TEST_CASE("error decay slope: two bubbles, quick version") {
  const RadialPotential v0 = RadialPotential::constant(0.0);
  std::vector<double> grid;
  for (int i = 0; i < 4; ++i) grid.push_back(24.0 * std::pow(10.0, i / 3.0));
  const SlopeFit fit =
      error_decay_slope(2, params54, v0, consts54, 1.0, grid, 60, 3e-4);
  CHECK_FALSE(fit.degenerate_zero);
  CHECK(fit.slope <= -1.0);
  CHECK(fit.r_squared >= 0.98);
  CHECK(fit.monotone);
}

TEST_CASE("two-center inequality witness") {
  Point xi(5), xj(5);
  xj[0] = 2.0;
  // sigma = min(alpha, beta) = 3, |xi - xj| = 2.
  const WitnessResult w = check_two_center_inequality(3, 3, 3, xi, xj, 20000, 5);
  CHECK(w.pass);
  CHECK(w.c_witness > 0.0);
  CHECK(w.c_witness <= 4.0);
  // Translation invariance of the witness.
  Point s(5);
  s[2] = 5.0;
  const WitnessResult wt =
      check_two_center_inequality(3, 3, 3, xi + s, xj + s, 20000, 5);
  CHECK(wt.c_witness == doctest::Approx(w.c_witness).epsilon(1e-9));
  // Parameter validation.
  CHECK_THROWS_AS(check_two_center_inequality(0.5, 3, 0.5, xi, xj, 100, 5),
                  std::domain_error);
  CHECK_THROWS_AS(check_two_center_inequality(3, 3, 4, xi, xj, 100, 5),
                  std::domain_error);
}

TEST_CASE("convolution bound witness and slope") {
  const int N = 5;
  const double mu = 4.0;
  // alpha = N - mu: uniform boundedness over offsets up to 10^3.
  {
    std::vector<double> offsets = {0.0, 1.0, 10.0, 100.0, 1000.0};
    const WitnessResult w = check_convolution_bound(N - mu, 0.5, mu, N, offsets);
    CHECK(w.pass);
    CHECK(w.c_witness > 0.0);
  }
  // Far-field slope matches -(alpha - N + mu); eta kept small since the
  // actual decay carries the eta slack of the bound.
  {
    std::vector<double> offsets = {10.0, 31.6, 100.0, 316.0, 1000.0};
    const double a = N - mu + 1.5;
    const double slope = convolution_bound_slope(a, 0.05, mu, N, offsets, 1e-7);
    CHECK(std::abs(slope + (a - N + mu)) <= 0.1);
  }
  CHECK_THROWS_AS(check_convolution_bound(0.5, 0.5, mu, N, {1.0}),
                  std::domain_error);
}

TEST_CASE("elementary inequality witnesses") {
  for (double q : {0.5, 1.5, 3.0}) {
    const ElementaryWitness w = check_elementary_inequalities(q, 40000, 13);
    CHECK(w.pass);
    CHECK(w.c_witness > 0.0);
    CHECK(std::isfinite(w.c_witness));
  }
  // q = 2: the second display |(a+b)^2 - a^2 - 2ab| = b^2 is an identity, so
  // its witness is 1 up to the cancellation roundoff of the heavy-tailed
  // samples (|a| up to ~1e6 against |b| ~ 1).
  const ElementaryWitness w2 = check_elementary_inequalities(2.0, 40000, 13);
  CHECK(w2.pass);
  CHECK(w2.c_second == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(w2.c_first <= 2.0 + 1e-9);
  // q = 3, a = 1, b = -2 sits inside the sampled family; witness covers it.
  const ElementaryWitness w3 = check_elementary_inequalities(3.0, 40000, 13);
  {
    const double lhs = std::abs(std::pow(std::abs(1.0 - 2.0), 3.0) - 1.0 -
                                3.0 * 1.0 * (-2.0));
    const double rhs = 1.0 * 4.0 + 8.0;
    CHECK(w3.c_second >= lhs / rhs - 1e-12);
  }
  CHECK_THROWS_AS(check_elementary_inequalities(0.0, 100, 1), std::domain_error);
}

TEST_SUITE_END();
