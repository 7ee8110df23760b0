#include "choquard/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "choquard/parallel.hpp"

namespace choquard {

WeightedNormSpec::WeightedNormSpec(Kind kind_in, int N, double tau_in)
    : kind(kind_in), tau(tau_in) {
  if (!(tau > 0.0)) throw std::invalid_argument("WeightedNormSpec: tau > 0");
  if (kind == Kind::star) {
    exponent = 0.5 * (N - 2) + tau;
    lambda_power = -0.5 * (N - 2);
  } else {
    exponent = 0.5 * (N + 2) + tau;
    lambda_power = -0.5 * (N + 2);
  }
}

double weighted_ratio(const WeightedNormSpec& spec, const BubbleConfig& config,
                      double fx, const Point& x) {
  if (fx == 0.0) return 0.0;
  double s = 0.0;
  for (const Point& xi : config.centers)
    s += std::pow(1.0 + config.lambda * dist(x, xi), -spec.exponent);
  return std::abs(fx) * std::pow(config.lambda, spec.lambda_power) / s;
}

namespace {

struct SimpleRng {
  std::mt19937_64 gen;
  explicit SimpleRng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return ((gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0); }
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  double cauchy() { return std::tan(M_PI * (uniform() - 0.5)); }
};

}  // namespace

NormEstimate weighted_norm_estimate(const std::function<double(const Point&)>& f,
                                    const WeightedNormSpec& spec,
                                    const BubbleConfig& config,
                                    std::int64_t sampling_budget,
                                    std::uint64_t seed,
                                    bool restrict_to_first_sector) {
  const int N = config.params.N;
  const double lambda = config.lambda;
  const double r = config.r;
  const int k = config.k;

  std::vector<Point> candidates;
  const int jmax = restrict_to_first_sector ? 1 : k;
  for (int j = 0; j < jmax; ++j) candidates.push_back(config.centers[j]);
  // Midpoints of center pairs (restricted: those involving xi_1).
  for (int i = 0; i < jmax; ++i)
    for (int j = i + 1; j < k; ++j)
      candidates.push_back(0.5 * (config.centers[i] + config.centers[j]));
  // Rings around centers at radii lambda^{-1} {1/2, 1, 2, 4}: radial and
  // tangential in-plane directions, the first orthogonal axis, diagonals.
  for (int j = 0; j < jmax; ++j) {
    const Point& xi = config.centers[j];
    Point er(N), et(N), ez(N);
    er[0] = xi[0] / r;
    er[1] = xi[1] / r;
    et[0] = -xi[1] / r;
    et[1] = xi[0] / r;
    if (N > 2) ez[2] = 1.0;
    std::vector<Point> dirs = {er, et, ez};
    {
      Point diag(N);
      const double c = 1.0 / std::sqrt(2.0);
      for (int m = 0; m < N; ++m) diag[m] = c * (er[m] + ez[m]);
      dirs.push_back(diag);
    }
    for (double rho : {0.5, 1.0, 2.0, 4.0})
      for (const Point& dir : dirs)
        for (double sgn : {1.0, -1.0})
          candidates.push_back(xi + (sgn * rho / lambda) * dir);
  }
  // The symmetry axis x' = 0 and the origin.
  {
    Point axis(N);
    candidates.push_back(axis);
    if (N > 2)
      for (double h : {0.5 * r, r, 2.0 * r}) {
        Point p(N);
        p[2] = h;
        candidates.push_back(p);
      }
  }
  // Seeded far-field points, |x| in [2r, 20r].
  {
    SimpleRng rng(seed);
    const std::int64_t nfar =
        std::min<std::int64_t>(std::max<std::int64_t>(sampling_budget / 4, 8), 64);
    for (std::int64_t i = 0; i < nfar; ++i) {
      Point dir(N);
      double nrm = 0.0;
      do {
        for (int m = 0; m < N; ++m) dir[m] = rng.normal();
        nrm = dir.norm();
      } while (nrm == 0.0);
      const double rad = 2.0 * r * std::pow(10.0, rng.uniform());
      candidates.push_back((rad / nrm) * dir);
    }
  }

  NormEstimate out;
  if (static_cast<std::int64_t>(candidates.size()) > sampling_budget) {
    candidates.resize(sampling_budget);  // deterministic prefix
    out.converged = false;
  }
  std::int64_t used = 0;
  std::vector<double> ratios(candidates.size(), 0.0);
  parallel_for(candidates.size(), [&](std::size_t i) {
    ratios[i] = weighted_ratio(spec, config, f(candidates[i]), candidates[i]);
  });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ++used;
    out.value = std::max(out.value, ratios[i]);
  }

  // Compass pattern search from the best candidates.
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ratios[a] > ratios[b]; });
  const int nstarts = static_cast<int>(std::min<std::size_t>(3, order.size()));
  for (int s = 0; s < nstarts; ++s) {
    Point x = candidates[order[s]];
    double fx = ratios[order[s]];
    double step = 0.5 / lambda;
    while (step > 1e-4 / lambda) {
      if (used + 2 * N > sampling_budget) {
        out.converged = false;
        break;
      }
      bool improved = false;
      for (int m = 0; m < N && !improved; ++m)
        for (double sgn : {1.0, -1.0}) {
          Point y = x;
          y[m] += sgn * step;
          const double fy = weighted_ratio(spec, config, f(y), y);
          ++used;
          if (fy > fx) {
            fx = fy;
            x = y;
            improved = true;
            break;
          }
        }
      if (!improved) step *= 0.5;
    }
    out.value = std::max(out.value, fx);
    if (!out.converged) break;
  }
  return out;
}

namespace {

void least_squares(SlopeFit& fit) {
  const std::size_t n = fit.points.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double den = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double sst = syy - sy * sy / n;
  double sse = 0.0;
  for (auto [x, y] : fit.points) {
    const double e = y - (fit.slope * x + fit.intercept);
    sse += e * e;
  }
  fit.r_squared = (sst > 0.0) ? std::max(0.0, 1.0 - sse / sst) : 1.0;
}

}  // namespace

SlopeFit error_decay_slope(int k, const ProblemParams& params,
                           const RadialPotential& potential,
                           const EnergyConstants& consts, double r,
                           const std::vector<double>& lambda_grid,
                           std::int64_t candidate_budget, double quad_tol) {
  if (lambda_grid.size() < 4)
    throw std::invalid_argument("error_decay_slope: need >= 4 lambda values");
  SlopeFit fit;
  std::vector<double> norms(lambda_grid.size(), 0.0);
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const BubbleConfig config(params, k, r, lambda_grid[i]);
    const WeightedNormSpec spec(WeightedNormSpec::Kind::star_star, params.N);
    auto f = [&](const Point& x) {
      return error_term_eval(config, potential, consts, x, spec.tau, quad_tol)
          .value;
    };
    // The error term and the weight share the polygon symmetry, so the sup
    // over R^N equals the sup over the first sector.
    norms[i] =
        weighted_norm_estimate(f, spec, config, candidate_budget, 7, true).value;
  }
  // Degenerate all-zero input (k = 1 with V = 0): no slope to fit.
  double scale = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i)
    scale = std::max(scale, std::abs(norms[i]));
  if (scale < 1e-13) {
    fit.degenerate_zero = true;
    return fit;
  }
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (i > 0 && norms[i] > norms[i - 1]) fit.monotone = false;
    fit.points.emplace_back(std::log(lambda_grid[i]), std::log(norms[i]));
  }
  least_squares(fit);
  return fit;
}

WitnessResult check_two_center_inequality(double a, double b, double s,
                                          const Point& xi_i, const Point& xi_j,
                                          std::int64_t sample_count,
                                          std::uint64_t seed) {
  if (!(a >= 1.0) || !(b >= 1.0))
    throw std::domain_error("check_two_center_inequality: requires a, b >= 1");
  if (!(s > 0.0) || !(s <= std::min(a, b)))
    throw std::domain_error(
        "check_two_center_inequality: requires 0 < s <= min(a, b)");
  const int N = xi_i.dim();
  const double d = dist(xi_i, xi_j);
  if (!(d > 0.0))
    throw std::invalid_argument("check_two_center_inequality: xi_i = xi_j");

  auto witness = [&](std::int64_t n) {
    SimpleRng rng(seed);
    double c = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      Point x(N);
      const int mode = static_cast<int>(i % 3);
      if (mode == 2) {
        // Points near the segment between the centers.
        const double t = rng.uniform();
        x = xi_i + t * (xi_j - xi_i);
        for (int m = 0; m < N; ++m) x[m] += 0.1 * d * rng.cauchy();
      } else {
        const Point& base = (mode == 0) ? xi_i : xi_j;
        x = base;
        const double scale = (rng.uniform() < 0.5) ? 1.0 : 4.0 * d;
        for (int m = 0; m < N; ++m) x[m] += scale * rng.cauchy();
      }
      const double si = dist(x, xi_i), sj = dist(x, xi_j);
      const double lhs = std::pow(1.0 + si, -a) * std::pow(1.0 + sj, -b);
      const double rhs0 = std::pow(1.0 + si, -(a + b - s)) +
                          std::pow(1.0 + sj, -(a + b - s));
      c = std::max(c, lhs * std::pow(d, s) / rhs0);
    }
    return c;
  };

  WitnessResult out;
  const double c1 = witness(sample_count);
  const double c2 = witness(2 * sample_count);
  out.c_witness = c2;
  out.pass = std::isfinite(c2) && c2 > 0.0 && (c2 - c1) <= 0.05 * c1;
  return out;
}

namespace {

double convolution_lhs(double a, double eta, double mu, int N, double offset,
                       double tol) {
  Point z(N), origin(N);
  z[0] = offset;
  auto g = [=](double s, double t) {
    return std::pow(s, -mu) * std::pow(1.0 + t, -(a + eta));
  };
  if (offset == 0.0) {
    auto f = [=](double rho) { return std::pow(rho, -mu) * std::pow(1.0 + rho, -(a + eta)); };
    return integrate_radial(f, N, tol).value;
  }
  // Both factors vary on the unit scale regardless of the offset.
  return integrate_two_center(g, origin, z, N, tol, kDefaultBudget, 1.0).value;
}

}  // namespace

WitnessResult check_convolution_bound(double a, double eta, double mu, int N,
                                      const std::vector<double>& offsets,
                                      double tol) {
  if (!(a >= N - mu))
    throw std::domain_error("check_convolution_bound: requires a >= N - mu");
  if (!(eta > 0.0))
    throw std::domain_error("check_convolution_bound: requires eta > 0");
  WitnessResult out;
  double c_coarse = 0.0, c_fine = 0.0;
  for (double off : offsets) {
    const double grow = std::pow(1.0 + off, a - N + mu);
    c_coarse = std::max(c_coarse, convolution_lhs(a, eta, mu, N, off, tol) * grow);
    c_fine = std::max(c_fine, convolution_lhs(a, eta, mu, N, off, 0.25 * tol) * grow);
  }
  out.c_witness = c_fine;
  out.pass = std::isfinite(c_fine) && c_fine > 0.0 &&
             std::abs(c_fine - c_coarse) <= 0.01 * c_fine;
  return out;
}

double convolution_bound_slope(double a, double eta, double mu, int N,
                               const std::vector<double>& offsets, double tol) {
  SlopeFit fit;
  for (double off : offsets)
    fit.points.emplace_back(std::log(1.0 + off),
                            std::log(convolution_lhs(a, eta, mu, N, off, tol)));
  least_squares(fit);
  return fit.slope;
}

ElementaryWitness check_elementary_inequalities(double q,
                                                std::int64_t sample_count,
                                                std::uint64_t seed) {
  if (!(q > 0.0))
    throw std::domain_error("check_elementary_inequalities: requires q > 0");

  auto witness = [&](std::int64_t n) {
    SimpleRng rng(seed);
    std::pair<double, double> c{0.0, 0.0};
    for (std::int64_t i = 0; i < n; ++i) {
      const double aa = rng.cauchy();
      // Mix magnitudes so both |b| << |a| and |b| >> |a| branches are hit.
      const double bb = rng.cauchy() * std::pow(10.0, 3.0 * (rng.uniform() - 0.5));
      if (aa == 0.0 || bb == 0.0) continue;
      const double lhs1 = std::abs(std::pow(std::abs(aa + bb), q) -
                                   std::pow(std::abs(aa), q));
      if (q < 1.0) {
        const double rhs = std::min(std::pow(std::abs(bb), q),
                                    std::pow(std::abs(aa), q - 1.0) * std::abs(bb));
        if (rhs > 0.0) c.first = std::max(c.first, lhs1 / rhs);
      } else if (q <= 2.0) {
        const double rhs = std::pow(std::abs(aa), q - 1.0) * std::abs(bb) +
                           std::pow(std::abs(bb), q);
        if (rhs > 0.0) c.first = std::max(c.first, lhs1 / rhs);
      }
      const double lhs2 =
          std::abs(std::pow(std::abs(aa + bb), q) - std::pow(std::abs(aa), q) -
                   q * std::pow(std::abs(aa), q - 2.0) * aa * bb);
      if (q > 2.0) {
        const double rhs = std::pow(std::abs(aa), q - 2.0) * bb * bb +
                           std::pow(std::abs(bb), q);
        if (rhs > 0.0) c.second = std::max(c.second, lhs2 / rhs);
      } else {
        const double rhs = std::pow(std::abs(bb), q);
        if (rhs > 0.0) c.second = std::max(c.second, lhs2 / rhs);
      }
    }
    return c;
  };

  ElementaryWitness out;
  const auto c1 = witness(sample_count);
  const auto c2 = witness(2 * sample_count);
  out.c_first = c2.first;
  out.c_second = c2.second;
  out.c_witness = std::max(c2.first, c2.second);
  const double g1 = std::max(c1.first, c1.second);
  out.pass = std::isfinite(out.c_witness) && out.c_witness > 0.0 &&
             (out.c_witness - g1) <= 0.05 * g1;
  return out;
}

}  // namespace choquard
