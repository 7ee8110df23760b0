#include "choquard/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "choquard/parallel.hpp"
#include "choquard/special.hpp"

namespace choquard {

namespace {

double d_frak_of(const ProblemParams& params, double alpha) {
  return std::pow(alpha, params.two_star_mu) * riesz_factor(params.N, 0.5 * params.mu);
}

}  // namespace

double riesz_potential_bubble(const ProblemParams& params, double alpha,
                              double lambda, const Point& xi, const Point& x) {
  const double d = d_frak_of(params, alpha);
  const double t = 1.0 + lambda * lambda * dist2(x, xi);
  return d * std::pow(lambda / t, 0.5 * params.mu);
}

double riesz_potential_lambda_derivative(const ProblemParams& params,
                                         double alpha, double lambda,
                                         const Point& xi, const Point& x) {
  const double d = d_frak_of(params, alpha);
  const double w = dist2(x, xi);
  const double t = 1.0 + lambda * lambda * w;
  return d * 0.5 * params.mu * std::pow(lambda, 0.5 * params.mu - 1.0) *
         (1.0 - lambda * lambda * w) * std::pow(t, -0.5 * params.mu - 1.0);
}

double neg_laplacian_bubble(const ProblemParams& params, double alpha,
                            double lambda, const Point& xi, const Point& x) {
  const int N = params.N;
  const double t = 1.0 + lambda * lambda * dist2(x, xi);
  return N * (N - 2.0) * alpha * std::pow(lambda, 0.5 * (N + 2)) *
         std::pow(t, -0.5 * (N + 2));
}

double bubble_residual(const ProblemParams& params, double alpha, double lambda,
                       const Point& xi, const Point& x) {
  const double u = bubble_eval(params, alpha, lambda, xi, x);
  const double riesz = riesz_potential_bubble(params, alpha, lambda, xi, x);
  return neg_laplacian_bubble(params, alpha, lambda, xi, x) -
         riesz * std::pow(u, params.two_star_mu - 1.0);
}

KernelResidual kernel_linearized_residual(const ProblemParams& params,
                                          double alpha, int i, const Point& x) {
  const int N = params.N;
  const double mu = params.mu;
  const double two_star = params.two_star_mu;
  if (i < 1 || i > N + 1)
    throw std::invalid_argument("kernel_linearized_residual: i out of range");
  const double d = d_frak_of(params, alpha);
  const double w = x.norm2();
  const double t = 1.0 + w;

  const double u_pow = std::pow(alpha, two_star - 1.0) *
                       std::pow(t, -0.5 * (N + 2.0 - mu));  // U^{2*-1}
  const double riesz = d * std::pow(t, -0.5 * mu);          // lambda = 1
  const double z = kernel_eval(params, alpha, i, x);
  const double u_pow2 = std::pow(alpha, two_star - 2.0) *
                        std::pow(t, -0.5 * (4.0 - mu));  // U^{2*-2}

  double lhs, conv;
  if (i <= N) {
    lhs = -N * (N + 2.0) * (N - 2.0) * alpha * x[i - 1] * std::pow(t, -0.5 * (N + 4));
    // (1/2*) d_{x_i} of the Riesz closed form.
    conv = -(mu * d / two_star) * x[i - 1] * std::pow(t, -0.5 * mu - 1.0);
  } else {
    lhs = N * (N - 2.0) * (N + 2.0) * 0.5 * alpha * (1.0 - w) *
          std::pow(t, -0.5 * (N + 4));
    // (1/2*) d_lambda of the Riesz closed form at lambda = 1.
    conv = (mu * d / (2.0 * two_star)) * (1.0 - w) * std::pow(t, -0.5 * mu - 1.0);
  }
  const double rhs = two_star * conv * u_pow + (two_star - 1.0) * riesz * u_pow2 * z;
  KernelResidual out;
  out.residual = lhs - rhs;
  out.scale = std::abs(lhs) + std::abs(rhs) +
              N * (N + 2.0) * (N - 2.0) * alpha * std::pow(t, -0.5 * (N + 4));
  return out;
}

QuadratureResult pair_interaction(const ProblemParams& params,
                                  const EnergyConstants& consts, double lambda,
                                  const Point& xi_i, const Point& xi_j,
                                  double tol, std::int64_t budget) {
  if (!(dist(xi_i, xi_j) > 0.0))
    throw std::invalid_argument("pair_interaction: coincident centers");
  const int N = params.N;
  const double hp = 0.5 * (N + 2), h2 = 0.5 * (N - 2);
  const double cp = consts.d_frak * std::pow(consts.alpha, params.two_star_mu - 1.0) *
                    std::pow(lambda, hp);
  const double cu = consts.alpha * std::pow(lambda, h2);
  auto g = [=](double s, double t) {
    return cp * std::pow(1.0 + lambda * lambda * s * s, -hp) * cu *
           std::pow(1.0 + lambda * lambda * t * t, -h2);
  };
  return integrate_two_center(g, xi_i, xi_j, N, tol, budget, 1.0 / lambda);
}

std::vector<McStratum> config_strata(const BubbleConfig& config) {
  std::vector<McStratum> strata;
  strata.reserve(config.k + 1);
  for (const Point& xi : config.centers)
    strata.push_back({xi, 1.0 / config.lambda});
  Point origin(config.params.N);
  strata.push_back({origin, 2.0 * config.r + 1.0});
  return strata;
}

namespace {

// Canonical key of an index multiset relative to vertex 1 under the dihedral
// symmetries fixing vertex 1 (identity and the reflection o -> k - o).
std::vector<int> canonical_offsets(const std::vector<int>& offsets, int k) {
  std::vector<int> a = offsets, b;
  b.reserve(a.size());
  for (int o : a) b.push_back(o == 0 ? 0 : k - o);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::min(a, b);
}

struct EnergyTerm {
  std::vector<int> key;    // canonical offsets
  double multiplicity = 0; // number of congruent copies
};

// Groups the offset tuples by congruence class.
std::vector<EnergyTerm> group_terms(const std::vector<std::vector<int>>& tuples,
                                    int k) {
  std::map<std::vector<int>, double> acc;
  for (const auto& t : tuples) acc[canonical_offsets(t, k)] += 1.0;
  std::vector<EnergyTerm> out;
  out.reserve(acc.size());
  for (auto& [key, mult] : acc) out.push_back({key, mult});
  return out;
}

}  // namespace

QuadratureResult ansatz_energy(const BubbleConfig& config,
                               const RadialPotential& potential,
                               const EnergyConstants& consts, double tol,
                               std::int64_t budget, std::uint64_t seed) {
  const ProblemParams& params = config.params;
  const int N = params.N, k = config.k;
  const double lambda = config.lambda;
  const double two_star = params.two_star_mu;
  const double alpha = consts.alpha;
  const double hp = 0.5 * (N + 2), h2 = 0.5 * (N - 2), hmu = 0.5 * params.mu;
  const bool exact_path = std::abs(params.mu - 4.0) < 1e-12;

  const double cu = alpha * std::pow(lambda, h2);
  auto prof_u = [=](double t) {
    return cu * std::pow(1.0 + lambda * lambda * t * t, -h2);
  };
  auto prof_r = [=](double s) {
    return consts.d_frak *
           std::pow(lambda / (1.0 + lambda * lambda * s * s), hmu);
  };
  const double cru = consts.d_frak * std::pow(alpha, two_star - 1.0) *
                     std::pow(lambda, hp);
  auto prof_ru = [=](double s) {  // R * U^{2*-1}, the -Delta U profile
    return cru * std::pow(1.0 + lambda * lambda * s * s, -hp);
  };

  std::vector<QuadratureResult> parts;
  auto add = [&parts](QuadratureResult q, double coeff) {
    q.value *= coeff;
    q.abs_error_estimate *= std::abs(coeff);
    parts.push_back(q);
  };

  const Point& xi1 = config.centers[0];
  const Point origin(N);
  const std::int64_t sub_budget = std::max<std::int64_t>(budget / 16, 100000);

  // --- Kinetic term: (1/2) k C + (1/2) k sum_{j>=2} PI(1, j).
  add(integrate_radial([&](double rho) { return prof_ru(rho) * prof_u(rho); },
                       N, 0.1 * tol, sub_budget, 1.0 / lambda),
      0.5 * k);
  {
    std::vector<std::vector<int>> tuples;
    for (int o = 1; o < k; ++o) tuples.push_back({o});
    for (const EnergyTerm& t : group_terms(tuples, k)) {
      const Point& xj = config.centers[t.key[0]];
      add(integrate_two_center(
              [&](double s, double u) { return prof_ru(s) * prof_u(u); }, xi1,
              xj, N, tol, sub_budget, 1.0 / lambda),
          0.5 * k * t.multiplicity);
    }
  }

  // --- Potential term: (1/2) k [ int V U^2 + sum_{j>=2} int V U_1 U_j ].
  if (!potential.is_constant() || potential.value(0.0) != 0.0) {
    if (potential.is_constant()) {
      const double v0 = potential.value(0.0);
      add(integrate_radial(
              [&](double rho) {
                const double u = prof_u(rho);
                return v0 * u * u;
              },
              N, 0.1 * tol, sub_budget, 1.0 / lambda),
          0.5 * k);
    } else {
      add(integrate_two_center(
              [&](double s, double t) {
                const double u = prof_u(t);
                return potential.value(s) * u * u;
              },
              origin, xi1, N, tol, sub_budget, 1.0 / lambda),
          0.5 * k);
    }
    std::vector<std::vector<int>> tuples;
    for (int o = 1; o < k; ++o) tuples.push_back({o});
    for (const EnergyTerm& t : group_terms(tuples, k)) {
      const Point& xj = config.centers[t.key[0]];
      if (potential.is_constant()) {
        const double v0 = potential.value(0.0);
        add(integrate_two_center(
                [&](double s, double u) { return v0 * prof_u(s) * prof_u(u); },
                xi1, xj, N, tol, sub_budget, 1.0 / lambda),
            0.5 * k * t.multiplicity);
      } else {
        add(integrate_three_center(
                [&](double s0, double s1, double sj) {
                  return potential.value(s0) * prof_u(s1) * prof_u(sj);
                },
                origin, xi1, xj, N, tol, sub_budget, 1.0 / lambda),
            0.5 * k * t.multiplicity);
      }
    }
  }

  // --- Choquard term.
  const double dcoeff = -1.0 / (2.0 * two_star);
  if (exact_path) {
    // D(W) = k T_diag + 2 k T_off + Q, with
    //   T_diag = sum_l int R_1 U_l^2,
    //   T_off  = sum_{l<m} int R_1 U_l U_m   (counted once here, doubled below),
    //   Q      = int int G(y) G(x) |x-y|^{-mu},  G = W^2 - sum U_l^2.
    add(integrate_radial(
            [&](double rho) {
              const double u = prof_u(rho);
              return prof_r(rho) * u * u;
            },
            N, 0.1 * tol, sub_budget, 1.0 / lambda),
        dcoeff * k);
    {
      std::vector<std::vector<int>> diag;
      for (int o = 1; o < k; ++o) diag.push_back({o});
      for (const EnergyTerm& t : group_terms(diag, k)) {
        const Point& xl = config.centers[t.key[0]];
        add(integrate_two_center(
                [&](double s, double u) {
                  const double ul = prof_u(u);
                  return prof_r(s) * ul * ul;
                },
                xi1, xl, N, tol, sub_budget, 1.0 / lambda),
            dcoeff * k * t.multiplicity);
      }
    }
    {
      // Ordered off-diagonal pairs (l, m), l != m: multiplicity 2 per {l, m}.
      std::vector<std::vector<int>> pairs12;   // 1 in the pair
      std::vector<std::vector<int>> pairs_far; // both >= 2
      for (int l = 0; l < k; ++l)
        for (int m = l + 1; m < k; ++m) {
          if (l == 0)
            pairs12.push_back({m});
          else
            pairs_far.push_back({l, m});
        }
      for (const EnergyTerm& t : group_terms(pairs12, k)) {
        const Point& xm = config.centers[t.key.back()];
        add(integrate_two_center(
                [&](double s, double u) {
                  return prof_r(s) * prof_u(s) * prof_u(u);
                },
                xi1, xm, N, tol, sub_budget, 1.0 / lambda),
            dcoeff * 2.0 * k * 2.0 * t.multiplicity);
      }
      for (const EnergyTerm& t : group_terms(pairs_far, k)) {
        const Point& xl = config.centers[t.key[0]];
        const Point& xm = config.centers[t.key[1]];
        add(integrate_three_center(
                [&](double s, double sl, double sm) {
                  return prof_r(s) * prof_u(sl) * prof_u(sm);
                },
                xi1, xl, xm, N, tol, sub_budget, 1.0 / lambda),
            dcoeff * 2.0 * k * 2.0 * t.multiplicity);
      }
    }
    if (k >= 2) {
      auto cross = [&](const Point& y) {
        double w = 0.0, diag = 0.0;
        for (const Point& xi : config.centers) {
          const double u = bubble_eval(params, alpha, lambda, xi, y);
          w += u;
          diag += u * u;
        }
        return w * w - diag;
      };
      const auto strata = config_strata(config);
      add(mc_double_convolution(cross, cross, params.mu, strata, strata,
                                1.0 / lambda, 200000, seed),
          dcoeff);
    }
  } else {
    auto wpow = [&](const Point& y) {
      return std::pow(ansatz_eval(config, y), two_star);
    };
    const auto strata = config_strata(config);
    add(mc_double_convolution(wpow, wpow, params.mu, strata, strata,
                              1.0 / lambda, 400000, seed),
        dcoeff);
  }

  QuadratureResult out;
  for (const QuadratureResult& q : parts) {
    out.value += q.value;
    out.abs_error_estimate += q.abs_error_estimate;
    out.evaluations += q.evaluations;
    out.converged = out.converged && q.converged;
    out.bias_warning = out.bias_warning || q.bias_warning;
  }
  return out;
}

double error_term_weight(const BubbleConfig& config, const Point& x,
                         double tau) {
  const int N = config.params.N;
  const double lambda = config.lambda;
  const double expo = 0.5 * (N + 2) + tau;
  double s = 0.0;
  for (const Point& xi : config.centers)
    s += std::pow(1.0 + lambda * dist(x, xi), -expo);
  return std::pow(lambda, 0.5 * (N + 2)) * s;
}

ErrorTermSample error_term_eval(const BubbleConfig& config,
                                const RadialPotential& potential,
                                const EnergyConstants& consts, const Point& x,
                                double tau, double tol, std::int64_t budget) {
  const ProblemParams& params = config.params;
  if (std::abs(params.mu - 4.0) > 1e-12)
    throw std::invalid_argument(
        "error_term_eval: exact expansion requires mu = 4");
  const int N = params.N, k = config.k;
  const double lambda = config.lambda;
  const double alpha = consts.alpha;
  const double h2 = 0.5 * (N - 2);

  std::vector<double> u(k), rz(k);
  for (int j = 0; j < k; ++j) {
    u[j] = bubble_eval(params, alpha, lambda, config.centers[j], x);
    rz[j] = riesz_potential_bubble(params, alpha, lambda, config.centers[j], x);
  }
  double w = 0.0;
  for (int j = 0; j < k; ++j) w += u[j];

  // sum_{i != l} R_i U_l  =  (sum R_i)(sum U_l) - sum R_j U_j
  double rsum = 0.0, diag = 0.0;
  for (int j = 0; j < k; ++j) {
    rsum += rz[j];
    diag += rz[j] * u[j];
  }
  double value = rsum * w - diag - potential.value(x.norm()) * w;

  // Cross convolutions K_{ij} = |x|^{-mu} * (U_i U_j); pointwise bound
  // K_{ij} <= sqrt(R_i R_j) prunes pairs that cannot matter.
  if (k >= 2) {
    struct PairTerm {
      int i, j;
      double bound;
    };
    std::vector<PairTerm> pairs;
    double bound_total = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const double b = std::sqrt(rz[i] * rz[j]);
        pairs.push_back({i, j, b});
        bound_total += b;
      }
    const double scale_bound = std::abs(value) + 2.0 * bound_total * w;
    const double thr = 1e-5 * scale_bound / pairs.size();
    std::sort(pairs.begin(), pairs.end(),
              [](const PairTerm& a, const PairTerm& b) { return a.bound > b.bound; });

    const double cu = alpha * std::pow(lambda, h2);
    std::vector<double> kij(pairs.size(), 0.0);
    std::vector<std::size_t> live;
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (2.0 * pairs[p].bound * w >= thr) live.push_back(p);
    const std::int64_t sub_budget =
        std::max<std::int64_t>(budget / std::max<std::size_t>(live.size(), 1), 50000);
    parallel_for(live.size(), [&](std::size_t idx) {
      const PairTerm& pt = pairs[live[idx]];
      auto g = [&](double sx, double si, double sj) {
        return std::pow(sx, -params.mu) * cu *
               std::pow(1.0 + lambda * lambda * si * si, -h2) * cu *
               std::pow(1.0 + lambda * lambda * sj * sj, -h2);
      };
      kij[live[idx]] =
          integrate_three_center(g, x, config.centers[pt.i],
                                 config.centers[pt.j], N, tol, sub_budget,
                                 1.0 / lambda)
              .value;
    });
    double cross = 0.0;
    for (double v : kij) cross += v;
    value += 2.0 * cross * w;
  }

  ErrorTermSample out;
  out.x = x;
  out.value = value;
  out.weight = error_term_weight(config, x, tau);
  return out;
}

}  // namespace choquard
