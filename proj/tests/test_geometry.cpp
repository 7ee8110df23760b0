#include <doctest.h>

#include <cmath>
#include <random>

#include "choquard/geometry.hpp"

using namespace choquard;

TEST_SUITE_BEGIN("geometry");

namespace {

std::mt19937_64 g_gen(17);
double uni() { return (g_gen() >> 11) * (1.0 / 9007199254740992.0); }

Point random_point(int N, double scale) {
  Point x(N);
  for (int i = 0; i < N; ++i) x[i] = scale * (2.0 * uni() - 1.0);
  return x;
}

// Rotation by angle in the (x1,x2) plane.
Point rotate_plane(const Point& x, double angle) {
  Point y = x;
  const double c = std::cos(angle), s = std::sin(angle);
  y[0] = c * x[0] - s * x[1];
  y[1] = s * x[0] + c * x[1];
  return y;
}

}  // namespace

TEST_CASE("bubble evaluation") {
  const ProblemParams params(5, 4.0);
  const double alpha = alpha_coeff(params);
  const double lambda = 3.0;
  Point xi(5);
  xi[0] = 1.0;
  // x = xi: denominator 1.
  CHECK(bubble_eval(params, alpha, lambda, xi, xi) ==
        doctest::Approx(alpha * std::pow(lambda, 1.5)).epsilon(1e-14));
  // lambda |x - xi| = 1.
  Point x = xi;
  x[2] += 1.0 / lambda;
  CHECK(bubble_eval(params, alpha, lambda, xi, x) ==
        doctest::Approx(alpha * std::pow(lambda, 1.5) * std::pow(2.0, -1.5))
            .epsilon(1e-13));
  // Scaling: U_{lambda,0}(x) = lambda^{(N-2)/2} U_{1,0}(lambda x).
  const Point origin(5);
  for (int i = 0; i < 20; ++i) {
    const Point y = random_point(5, 2.0);
    CHECK(bubble_eval(params, alpha, lambda, origin, y) ==
          doctest::Approx(std::pow(lambda, 1.5) *
                          bubble_eval(params, alpha, 1.0, origin, lambda * y))
              .epsilon(1e-13));
  }
}

TEST_CASE("rotation covariance of the bubble") {
  const ProblemParams params(6, 4.0);
  const double alpha = alpha_coeff(params);
  for (int i = 0; i < 30; ++i) {
    const Point x = random_point(6, 3.0);
    Point xi = random_point(6, 1.5);
    const double ang = 2.0 * M_PI * uni();
    CHECK(bubble_eval(params, alpha, 2.0, rotate_plane(xi, ang),
                      rotate_plane(x, ang)) ==
          doctest::Approx(bubble_eval(params, alpha, 2.0, xi, x))
              .epsilon(1e-12));
  }
}

TEST_CASE("polygon centers and pair distances") {
  for (int k = 2; k <= 64; ++k) {
    const double r = 1.3;
    const auto centers = polygon_centers(5, k, r);
    for (int j = 0; j < k; ++j) {
      CHECK(centers[j].norm() == doctest::Approx(r).epsilon(1e-14));
      const double expect = 2.0 * r * std::sin(M_PI * j / k);
      CHECK(dist(centers[j], centers[0]) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("ansatz symmetry") {
  const ProblemParams params(5, 4.0);
  const BubbleConfig config(params, 6, 1.0, 4.0);
  // k = 1 reduces to a single bubble.
  const BubbleConfig single(params, 1, 1.0, 4.0);
  for (int i = 0; i < 10; ++i) {
    const Point x = random_point(5, 2.0);
    CHECK(ansatz_eval(single, x) ==
          doctest::Approx(bubble_eval(params, single.alpha, 4.0,
                                      single.centers[0], x))
              .epsilon(1e-14));
  }
  // Invariance under rotation by 2 pi / k.
  for (int i = 0; i < 100; ++i) {
    const Point x = random_point(5, 2.5);
    CHECK(ansatz_eval(config, rotate_plane(x, 2.0 * M_PI / config.k)) ==
          doctest::Approx(ansatz_eval(config, x)).epsilon(1e-12));
  }
  // Evenness in x_h for every h = 2..N (the x_2 flip maps center j to center
  // k+2-j, so the polygon sum is even there as well).
  for (int i = 0; i < 50; ++i) {
    Point x = random_point(5, 2.5);
    for (int h = 1; h < 5; ++h) {
      Point y = x;
      y[h] = -y[h];
      CHECK(ansatz_eval(config, y) ==
            doctest::Approx(ansatz_eval(config, x)).epsilon(1e-12));
    }
  }
  // Per-bubble components sum to the ansatz.
  const Point x = random_point(5, 1.0);
  const auto comps = ansatz_components(config, x);
  double s = 0.0;
  for (double c : comps) s += c;
  CHECK(s == doctest::Approx(ansatz_eval(config, x)).epsilon(1e-14));
}

TEST_CASE("psi derivatives: closed form and finite differences") {
  const ProblemParams params(5, 4.0);
  const int k = 5;
  const double r = 1.1, lambda = 6.0;
  const BubbleConfig config(params, k, r, lambda);
  const double alpha = config.alpha;

  // psi_2 at x = xi_j and on its zero set lambda|x-xi_j| = 1.
  {
    const auto [p1, p2] = psi_derivatives(config, 2, config.centers[1]);
    CHECK(p2 == doctest::Approx(alpha * 1.5 * std::pow(lambda, 0.5))
                    .epsilon(1e-13));
    CHECK(p1 == doctest::Approx(0.0));
    Point x = config.centers[1];
    x[3] += 1.0 / lambda;
    CHECK(psi_derivatives(config, 2, x).second == doctest::Approx(0.0));
  }

  // Central finite differences in (r, lambda), step 1e-5.
  const double h = 1e-5;
  for (int trial = 0; trial < 25; ++trial) {
    const Point x = random_point(5, 2.0);
    const int j = 1 + static_cast<int>(uni() * k);
    const auto [p1, p2] = psi_derivatives(config, j, x);
    const BubbleConfig cr_hi(params, k, r + h, lambda);
    const BubbleConfig cr_lo(params, k, r - h, lambda);
    const double fd_r = (bubble_eval(params, alpha, lambda, cr_hi.centers[j - 1], x) -
                         bubble_eval(params, alpha, lambda, cr_lo.centers[j - 1], x)) /
                        (2.0 * h);
    const double fd_l =
        (bubble_eval(params, alpha, lambda + h, config.centers[j - 1], x) -
         bubble_eval(params, alpha, lambda - h, config.centers[j - 1], x)) /
        (2.0 * h);
    const double scale_r = std::max(std::abs(fd_r), 1e-6);
    const double scale_l = std::max(std::abs(fd_l), 1e-6);
    CHECK(std::abs(p1 - fd_r) / scale_r < 1e-6);
    CHECK(std::abs(p2 - fd_l) / scale_l < 1e-6);
  }
}

TEST_CASE("kernel elements") {
  const ProblemParams params(5, 4.0);
  const double alpha = alpha_coeff(params);
  const Point origin(5);
  // Z_{N+1}(0) = (N-2)/2 alpha; Z_i(0) = 0 for i <= N.
  CHECK(kernel_eval(params, alpha, 6, origin) ==
        doctest::Approx(1.5 * alpha).epsilon(1e-14));
  for (int i = 1; i <= 5; ++i)
    CHECK(kernel_eval(params, alpha, i, origin) == doctest::Approx(0.0));
  CHECK_THROWS_AS(kernel_eval(params, alpha, 7, origin), std::invalid_argument);

  // Z_i = dU/dx_i against finite differences; Z_{N+1} = +d_lambda U|_{lambda=1}
  // (the dilation generator equals the lambda-derivative with a plus sign).
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = random_point(5, 2.0);
    for (int i = 1; i <= 5; ++i) {
      Point xp = x, xm = x;
      xp[i - 1] += h;
      xm[i - 1] -= h;
      const double fd = (bubble_eval(params, alpha, 1.0, origin, xp) -
                         bubble_eval(params, alpha, 1.0, origin, xm)) /
                        (2.0 * h);
      CHECK(kernel_eval(params, alpha, i, x) ==
            doctest::Approx(fd).epsilon(1e-6));
    }
    const double fd_l = (bubble_eval(params, alpha, 1.0 + h, origin, x) -
                         bubble_eval(params, alpha, 1.0 - h, origin, x)) /
                        (2.0 * h);
    CHECK(kernel_eval(params, alpha, 6, x) ==
          doctest::Approx(fd_l).epsilon(1e-6));
  }
}

TEST_CASE("sectors partition R^N") {
  const ProblemParams params(5, 4.0);
  const BubbleConfig config(params, 6, 1.0, 4.0);
  std::vector<SectorDomain> sectors;
  for (int j = 1; j <= config.k; ++j) sectors.emplace_back(j, config);

  // x = xi_j belongs to sector j; xi_{j+1} does not (k >= 3).
  for (int j = 1; j <= config.k; ++j) {
    CHECK(sector_contains(sectors[j - 1], config.centers[j - 1]));
    CHECK_FALSE(
        sector_contains(sectors[j - 1], config.centers[j % config.k]));
  }
  // Boundary midpoint direction: assigned to exactly one sector (smallest
  // index wins).
  {
    const Point mid = 0.5 * (config.centers[0] + config.centers[1]);
    int count = 0, owner = 0;
    for (int j = 1; j <= config.k; ++j)
      if (sector_contains(sectors[j - 1], mid)) {
        ++count;
        owner = j;
      }
    CHECK(count == 1);
    CHECK(owner == 1);
  }
  // Partition property on random points with |x'| > 0.
  for (int i = 0; i < 10000; ++i) {
    Point x = random_point(5, 3.0);
    if (std::hypot(x[0], x[1]) == 0.0) continue;
    int count = 0;
    for (int j = 1; j <= config.k; ++j)
      if (sector_contains(sectors[j - 1], x)) ++count;
    CHECK(count == 1);
  }
  // The axis |x'| = 0 goes to sector 1.
  Point axis(5);
  axis[3] = 2.0;
  CHECK(sector_contains(sectors[0], axis));
  for (int j = 2; j <= config.k; ++j)
    CHECK_FALSE(sector_contains(sectors[j - 1], axis));
}

TEST_CASE("bubble config JSON round trip") {
  const ProblemParams params(6, 3.0);
  const BubbleConfig config(params, 5, 1.25, 42.0);
  const BubbleConfig back = bubble_config_from_json(bubble_config_to_json(config));
  CHECK(back.params.N == 6);
  CHECK(back.params.mu == doctest::Approx(3.0));
  CHECK(back.k == 5);
  CHECK(back.r == doctest::Approx(1.25));
  CHECK(back.lambda == doctest::Approx(42.0));
  CHECK(back.alpha == doctest::Approx(config.alpha).epsilon(1e-15));
  CHECK(back.centers.size() == 5);
  CHECK(dist(back.centers[2], config.centers[2]) == doctest::Approx(0.0));
}

TEST_CASE("lambda window") {
  const LambdaWindow win(5, 0.5, 5.0);
  CHECK(win.exponent == doctest::Approx(3.0));
  CHECK(win.contains(0.5 * 8.0 * 8.0 * 8.0, 8));
  CHECK_FALSE(win.contains(0.4 * 512.0, 8));
  CHECK_FALSE(win.contains(5.1 * 512.0, 8));
  CHECK_THROWS_AS(LambdaWindow(5, 2.0, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
