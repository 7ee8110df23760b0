#include "choquard/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "choquard/constants.hpp"
#include "choquard/nonlocal.hpp"
#include "choquard/parallel.hpp"
#include "choquard/special.hpp"
#include "choquard/verifier.hpp"

namespace choquard {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct VerifyRow {
  std::string name;
  double value, target, tol;
  bool pass;
};

int emit_rows(const std::vector<VerifyRow>& rows, std::ostream& out) {
  out << "# " << kSchemaTag << "\n";
  out << "name,value,target,tol,pass\n";
  bool all = true;
  for (const VerifyRow& r : rows) {
    out << r.name << ',' << fmt(r.value) << ',' << fmt(r.target) << ','
        << fmt(r.tol) << ',' << (r.pass ? 1 : 0) << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

struct SampleRng {
  std::mt19937_64 gen;
  explicit SampleRng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return ((gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0); }
  double normal() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Point direction(int N) {
    Point d(N);
    double n = 0.0;
    do {
      for (int m = 0; m < N; ++m) d[m] = normal();
      n = d.norm();
    } while (n == 0.0);
    return (1.0 / n) * d;
  }
};

// Domain center/halfwidth for scan and critical-point commands: explicit
// config values, else the interior extremum of r^2 V(r) near the family
// center.
std::pair<double, double> domain_of(const RunConfig& config,
                                    const RadialPotential& potential) {
  double r0 = config.r0;
  if (r0 <= 0.0) {
    if (potential.family() == RadialPotential::Family::gaussian_bump ||
        potential.family() == RadialPotential::Family::gaussian_well) {
      const nlohmann::json j = nlohmann::json::parse(potential.to_json());
      const double rc = j.at("r0").get<double>();
      // The profile extremum sits near but not exactly at the family center.
      double best_r = rc, best_p = potential.profile(rc);
      const bool want_max =
          potential.family() == RadialPotential::Family::gaussian_bump;
      for (int i = 0; i <= 4000; ++i) {
        const double r = rc * (0.5 + i * (1.5 - 0.5) / 4000.0);
        const double p = potential.profile(r);
        if (want_max ? (p > best_p) : (p < best_p)) {
          best_p = p;
          best_r = r;
        }
      }
      r0 = best_r;
    } else {
      throw std::invalid_argument(
          "domain: --r0 required for constant or tabulated potentials");
    }
  }
  const double delta = (config.delta > 0.0) ? config.delta : 0.1 * r0;
  return {r0, delta};
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c;
  c.apply_json(ss.str());
  return c;
}

void RunConfig::apply_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("N")) N = j.at("N").get<int>();
  if (j.contains("mu")) mu = j.at("mu").get<double>();
  if (j.contains("k")) k = j.at("k").get<int>();
  if (j.contains("potential")) potential_json = j.at("potential").dump();
  if (j.contains("lambda_window")) {
    L0 = j.at("lambda_window").at("L0").get<double>();
    L1 = j.at("lambda_window").at("L1").get<double>();
  }
  if (j.contains("tol")) tol = j.at("tol").get<double>();
  if (j.contains("budget")) budget = j.at("budget").get<std::int64_t>();
  if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out")) out_path = j.at("out").get<std::string>();
  if (j.contains("r0")) r0 = j.at("r0").get<double>();
  if (j.contains("delta")) delta = j.at("delta").get<double>();
  if (j.contains("theta")) theta = j.at("theta").get<double>();
  if (j.contains("eta")) eta = j.at("eta").get<double>();
  if (j.contains("alpha_scale")) alpha_scale = j.at("alpha_scale").get<double>();
}

int cmd_constants(const RunConfig& config, std::ostream& out) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants c = energy_constants(params);
  const int N = params.N;
  const double tol = std::min(config.tol, 1e-10);

  out << "# " << kSchemaTag << "\n";
  out << "name,closed_form,oracle,rel_diff\n";
  std::vector<std::array<double, 2>> vals;
  std::vector<std::string> names;

  auto jp_oracle = [&](double p) {
    return integrate_radial([p](double rho) { return std::pow(1.0 + rho * rho, -p); },
                            N, tol, config.budget)
        .value;
  };
  const double jn = radial_integral(N, N);
  const double jn_or = jp_oracle(N);
  const double jm2 = radial_integral(N, N - 2.0);
  const double jm2_or = jp_oracle(N - 2.0);
  const double jh = radial_integral(N, 0.5 * (N + 2));
  const double jh_or = jp_oracle(0.5 * (N + 2));
  // Riesz factor by the defining convolution at x = 0.
  const double mu = params.mu;
  const double iota_or =
      integrate_radial(
          [&](double rho) {
            return std::pow(rho, -mu) * std::pow(1.0 + rho * rho, -(N - 0.5 * mu));
          },
          N, tol, config.budget)
          .value;
  const double alpha_or =
      std::pow(N * (N - 2.0) / iota_or, (N - 2.0) / (2.0 * (N - mu + 2.0)));
  const double dfrak_or = std::pow(alpha_or, params.two_star_mu) * iota_or;
  const double s_std =
      N * (N - 2.0) * M_PI *
      std::pow(gamma_fn(0.5 * N) / gamma_fn(static_cast<double>(N)), 2.0 / N);
  const double c1_or =
      integrate_radial(
          [&](double rho) {
            return (1.0 - rho * rho) * std::pow(1.0 + rho * rho, -(N + 1.0));
          },
          N, tol, config.budget)
          .value;
  const double c1h_or =
      integrate_radial(
          [&](double rho) {
            return (1.0 - rho * rho) * std::pow(1.0 + rho * rho, -0.5 * (N + 4));
          },
          N, tol, config.budget)
          .value;
  // Sine-sum constant by Richardson extrapolation of direct sums.
  double b0_or;
  {
    const int k1 = 1 << 13, k2 = 1 << 14;
    const double s1 = sine_sum(k1, 1.0, N) / std::pow(k1, N - 2.0);
    const double s2 = sine_sum(k2, 1.0, N) / std::pow(k2, N - 2.0);
    // Error ~ k^{-(N-3)} up to logs; one Richardson step with that exponent.
    const double q = std::pow(2.0, -(N - 3.0));
    b0_or = (s2 - q * s1) / (1.0 - q);
  }
  const double hls_or =
      iota_or * std::pow(N * (N - 2.0) / s_std, 0.5 * (N - mu));

  auto push = [&](const std::string& name, double closed, double oracle) {
    names.push_back(name);
    vals.push_back({closed, oracle});
  };
  push("J_N", jn, jn_or);
  push("J_{N-2}", jm2, jm2_or);
  push("J_{(N+2)/2}", jh, jh_or);
  push("riesz_factor", c.riesz_factor, iota_or);
  push("alpha", c.alpha, alpha_or);
  push("d_frak", c.d_frak, dfrak_or);
  push("C_Nmu", c.c_big, dfrak_or * std::pow(alpha_or, params.two_star_mu) * jn_or);
  push("D_Nmu", c.d_big, dfrak_or * std::pow(alpha_or, params.two_star_mu) * jh_or);
  push("A", c.a_const,
       0.5 * (1.0 - 1.0 / params.two_star_mu) * dfrak_or *
           std::pow(alpha_or, params.two_star_mu) * jn_or);
  push("B1", c.b1, 0.5 * alpha_or * alpha_or * jm2_or);
  push("B2", c.b2, 0.5 * dfrak_or * std::pow(alpha_or, params.two_star_mu) * jh_or);
  push("c1_grad", c.c1_grad, c1_or);
  push("c1_half", c.c1_half, c1h_or);
  push("c2", c.c2, jh_or);
  push("B0_geom", c.b0_geom, b0_or);
  push("HLS", c.hls, hls_or);
  push("sobolev_S", c.sobolev_s, s_std);

  for (std::size_t i = 0; i < names.size(); ++i) {
    // Floor keeps the column meaningful for constants that vanish
    // identically (c1_grad): those rows show the absolute difference scale.
    const double den = std::max({std::abs(vals[i][0]), std::abs(vals[i][1]), 1e-6});
    out << names[i] << ',' << fmt(vals[i][0]) << ',' << fmt(vals[i][1]) << ','
        << fmt(std::abs(vals[i][0] - vals[i][1]) / den) << "\n";
  }
  return 0;
}

int cmd_scan(const RunConfig& config, int r_steps, int lambda_steps,
             std::ostream& out) {
  if (r_steps < 1 || lambda_steps < 1)
    throw std::invalid_argument("scan: grid must be at least 1x1");
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential potential = RadialPotential::from_json(config.potential_json);
  const auto [r0, delta] = domain_of(config, potential);
  const ReducedEnergyDomain dom = make_domain(params.N, config.k, r0, delta,
                                              config.theta);
  out << "# " << kSchemaTag << "\n";
  out << "r,Lambda,lambda,F_exact_sum,F_asymptotic,dF_dlambda\n";
  const double nu = lambda_scaling_exponent(params.N);
  for (int i = 0; i < r_steps; ++i) {
    const double r =
        (r_steps == 1) ? r0
                       : dom.r_lo + (dom.r_hi - dom.r_lo) * i / (r_steps - 1.0);
    const LambdaStar ls = lambda_star(r, config.k, potential, consts);
    // Clamp the window bottom at a positive fraction of Lambda0 so the row
    // count is exactly r_steps * lambda_steps.
    const double lam_lo = std::max(ls.Lambda0 - dom.delta1, 0.05 * ls.Lambda0);
    const double lam_hi = ls.Lambda0 + dom.delta1;
    for (int j = 0; j < lambda_steps; ++j) {
      const double Lam =
          (lambda_steps == 1)
              ? ls.Lambda0
              : lam_lo + (lam_hi - lam_lo) * j / (lambda_steps - 1.0);
      const double lambda = Lam * std::pow(config.k, nu);
      out << fmt(r) << ',' << fmt(Lam) << ',' << fmt(lambda) << ','
          << fmt(reduced_F(config.k, r, lambda, potential, consts, false)) << ','
          << fmt(reduced_F(config.k, r, lambda, potential, consts, true)) << ','
          << fmt(reduced_F_dlambda(config.k, r, lambda, potential, consts, false))
          << "\n";
    }
  }
  return 0;
}

int cmd_critical_point(const RunConfig& config, CriticalCase which,
                       std::ostream& out) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential potential = RadialPotential::from_json(config.potential_json);
  const auto [r0, delta] = domain_of(config, potential);
  const ReducedEnergyDomain dom = make_domain(params.N, config.k, r0, delta,
                                              config.theta);
  const CriticalPoint cp =
      find_critical_point(which, config.k, potential, dom, consts, config.eta);

  nlohmann::json j;
  j["schema"] = kSchemaTag;
  j["r_star"] = cp.r_star;
  j["Lambda_star"] = cp.Lambda_star;
  j["lambda_star"] = cp.lambda_star;
  j["F_star"] = cp.F_star;
  j["classification"] = cp.classification;
  j["grad_norm"] = cp.grad_norm;
  j["hessian_eigs"] = {cp.hess_eig_lo, cp.hess_eig_hi};
  if (cp.has_bracket) {
    j["bracket"] = {{"alpha1", cp.bracket.alpha1},
                    {"c", cp.bracket.level},
                    {"alpha2", cp.bracket.alpha2}};
  } else {
    j["bracket"] = nullptr;
  }
  out << j.dump(2) << "\n";
  return 0;
}

namespace {

std::vector<VerifyRow> suite_riesz(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants c = energy_constants(params);
  const int N = params.N;
  const bool exact = std::abs(params.mu - 4.0) < 1e-12;
  SampleRng rng(config.seed);
  std::vector<VerifyRow> rows;
  const int npts = 25;
  std::vector<VerifyRow> tmp(npts);
  std::vector<std::pair<double, Point>> samples;
  for (int i = 0; i < npts; ++i) {
    const double lambda = std::pow(10.0, -0.3 + 1.6 * rng.uniform());
    const double rad = std::pow(10.0, -1.3 + 2.0 * rng.uniform()) / lambda;
    Point xi(N);
    xi[0] = 1.0;
    samples.emplace_back(lambda, xi + rad * rng.direction(N));
  }
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& [lambda, x] = samples[i];
    Point xi(N);
    xi[0] = 1.0;
    const double closed =
        riesz_potential_bubble(params, c.alpha, lambda, xi, x);
    VerifyRow row;
    row.name = "riesz_pt" + std::to_string(i);
    if (exact) {
      const double p = N - 0.5 * params.mu;
      const double cw = std::pow(c.alpha, params.two_star_mu) * std::pow(lambda, p);
      const auto q = integrate_three_center(
          [&](double sx, double sxi, double) {
            return std::pow(sx, -params.mu) * cw *
                   std::pow(1.0 + lambda * lambda * sxi * sxi, -p);
          },
          x, xi, xi, N, 1e-8, config.budget, 1.0 / lambda);
      row.value = std::abs(q.value - closed) / closed;
      row.target = 0.0;
      row.tol = 1e-6;
      row.pass = q.converged && row.value <= row.tol;
    } else {
      const double p = N - 0.5 * params.mu;
      const double cw = std::pow(c.alpha, params.two_star_mu) * std::pow(lambda, p);
      std::vector<McStratum> strata = {{xi, 1.0 / lambda}, {x, 0.5 / lambda}};
      const auto mc = monte_carlo_stratified(
          [&](const Point& y) {
            const double r = dist(y, x);
            if (r <= 0.0) return 0.0;
            return std::pow(r, -params.mu) * cw *
                   std::pow(1.0 + lambda * lambda * dist2(y, xi), -p);
          },
          strata, 200000, config.seed + i);
      row.value = std::abs(mc.value - closed);
      row.target = 0.0;
      row.tol = 3.0 * mc.abs_error_estimate;
      row.pass = row.value <= row.tol;
    }
    tmp[i] = row;
  });
  for (auto& r : tmp) rows.push_back(std::move(r));
  return rows;
}

std::vector<VerifyRow> suite_interaction(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants c = energy_constants(params);
  const int N = params.N;
  std::vector<VerifyRow> rows;
  Point a(N), b(N);
  b[0] = 1.0;
  const int npts = 7;
  std::vector<double> seps(npts), vals(npts);
  for (int i = 0; i < npts; ++i)
    seps[i] = 16.0 * std::pow(256.0 / 16.0, i / (npts - 1.0));
  parallel_for(npts, [&](std::size_t i) {
    vals[i] = pair_interaction(params, c, seps[i], a, b, 1e-7, config.budget)
                  .value;
  });
  SlopeFit fit;
  for (int i = 0; i < npts; ++i)
    fit.points.emplace_back(std::log(seps[i]), std::log(vals[i]));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope =
      (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  rows.push_back({"interaction_slope", slope, -(N - 2.0), 0.05,
                  std::abs(slope + (N - 2.0)) <= 0.05});
  const double ratio =
      vals[npts - 1] / (c.d_big * std::pow(seps[npts - 1], -(N - 2.0)));
  rows.push_back({"interaction_prefactor_ratio", ratio, 1.0, 0.05,
                  ratio >= 0.95 && ratio <= 1.05});
  return rows;
}

std::vector<VerifyRow> suite_kernel(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const double alpha = alpha_coeff(params) * config.alpha_scale;
  const int N = params.N;
  SampleRng rng(config.seed);
  std::vector<VerifyRow> rows;
  std::vector<Point> pts;
  for (int s = 0; s < 50; ++s) {
    Point x = rng.direction(N);
    x *= std::pow(10.0, -1.0 + 2.0 * rng.uniform());
    pts.push_back(x);
  }
  for (int i = 1; i <= N + 1; ++i) {
    double worst = 0.0;
    for (const Point& x : pts) {
      const KernelResidual kr = kernel_linearized_residual(params, alpha, i, x);
      worst = std::max(worst, std::abs(kr.residual) / kr.scale);
    }
    rows.push_back({"kernel_Z" + std::to_string(i), worst, 0.0, 1e-7,
                    worst <= 1e-7});
  }
  return rows;
}

std::vector<VerifyRow> suite_slope(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential potential = RadialPotential::from_json(config.potential_json);
  double r0 = 1.0;
  try {
    r0 = domain_of(config, potential).first;
  } catch (const std::invalid_argument&) {
    r0 = (config.r0 > 0.0) ? config.r0 : 1.0;
  }
  const double nu = lambda_scaling_exponent(params.N);
  const double base = std::pow(config.k, nu);
  std::vector<double> grid;
  for (int i = 0; i < 5; ++i)
    grid.push_back(config.L0 * base *
                   std::pow(config.L1 / config.L0, i / 4.0));
  std::vector<VerifyRow> rows;
  if (config.k == 1 && potential.is_constant() && potential.value(0.0) == 0.0) {
    const SlopeFit fit = error_decay_slope(config.k, params, potential, consts,
                                           r0, grid);
    rows.push_back({"slope_degenerate_zero", fit.degenerate_zero ? 1.0 : 0.0,
                    1.0, 0.0, fit.degenerate_zero});
    return rows;
  }
  const SlopeFit fit =
      error_decay_slope(config.k, params, potential, consts, r0, grid);
  for (const auto& [loglam, lognorm] : fit.points)
    rows.push_back({"norm_at_lambda_" + fmt(std::exp(loglam)),
                    std::exp(lognorm), 0.0, 0.0, true});
  rows.push_back({"error_decay_slope", fit.slope, -1.0, 0.0, fit.slope <= -1.0});
  rows.push_back({"error_decay_r2", fit.r_squared, 1.0, 0.02,
                  fit.r_squared >= 0.98});
  return rows;
}

std::vector<VerifyRow> suite_inequalities(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const int N = params.N;
  std::vector<VerifyRow> rows;
  Point xi(N), xj(N);
  xj[0] = 2.0;
  const struct {
    double a, b, s;
  } two_center_cases[] = {{3, 3, 3}, {2, 5, 2}, {1, 1, 0.5}, {4, 2, 1.5}};
  for (const auto& tc : two_center_cases) {
    const WitnessResult w = check_two_center_inequality(
        tc.a, tc.b, tc.s, xi, xj, 20000, config.seed);
    rows.push_back({"two_center_bound_a" + fmt(tc.a) + "_b" + fmt(tc.b) + "_s" + fmt(tc.s),
                    w.c_witness, 0.0, 0.0, w.pass});
  }
  {
    const double mu = params.mu;
    std::vector<double> offsets = {0.0, 1.0, 4.0, 16.0, 64.0, 256.0, 1000.0};
    const WitnessResult w =
        check_convolution_bound(N - mu + 1.0, 0.5, mu, N, offsets, 1e-6);
    rows.push_back({"riesz_convolution_bound", w.c_witness, 0.0, 0.0, w.pass});
    std::vector<double> far = {10.0, 31.6, 100.0, 316.0, 1000.0};
    // The far-field decay is -(a - N + mu) only up to the eta slack in the
    // bound, so the slope is measured with a small eta.
    const double slope =
        convolution_bound_slope(N - mu + 1.0, 0.05, mu, N, far, 1e-7);
    rows.push_back({"riesz_convolution_far_slope", slope, -1.0, 0.1,
                    std::abs(slope + 1.0) <= 0.1});
    const WitnessResult wb =
        check_convolution_bound(N - mu, 0.5, mu, N, offsets, 1e-6);
    rows.push_back({"riesz_convolution_boundary", wb.c_witness, 0.0, 0.0, wb.pass});
  }
  for (double q : {0.5, 1.5, 2.0, 3.0}) {
    const ElementaryWitness w =
        check_elementary_inequalities(q, 40000, config.seed);
    rows.push_back({"scalar_power_ineq_q" + fmt(q), w.c_witness, 0.0, 0.0, w.pass});
  }
  return rows;
}

std::vector<VerifyRow> suite_energy_match(const RunConfig& config) {
  const ProblemParams params(config.N, config.mu);
  const EnergyConstants consts = energy_constants(params);
  const RadialPotential potential = RadialPotential::from_json(config.potential_json);
  const double r0 = domain_of(config, potential).first;
  std::vector<VerifyRow> rows;
  const int npts = 5;
  std::vector<double> lams(npts), rem(npts);
  for (int i = 0; i < npts; ++i)
    lams[i] = 24.0 * std::pow(8.0, i / (npts - 1.0));
  for (int i = 0; i < npts; ++i) {
    const BubbleConfig bc(params, config.k, r0, lams[i]);
    const QuadratureResult e =
        ansatz_energy(bc, potential, consts, 1e-8, config.budget, config.seed);
    const double f = reduced_F(config.k, r0, lams[i], potential, consts, false);
    rem[i] = std::abs(e.value - f);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < npts; ++i) {
    const double x = std::log(lams[i]), y = std::log(rem[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  rows.push_back({"energy_match_remainder_slope_k" + std::to_string(config.k),
                  slope, -2.0, 0.0, slope < -2.0});
  return rows;
}

}  // namespace

int cmd_verify(const RunConfig& config, const std::string& suite,
               std::ostream& out) {
  std::vector<VerifyRow> rows;
  if (suite == "riesz")
    rows = suite_riesz(config);
  else if (suite == "interaction")
    rows = suite_interaction(config);
  else if (suite == "slope")
    rows = suite_slope(config);
  else if (suite == "kernel")
    rows = suite_kernel(config);
  else if (suite == "inequalities")
    rows = suite_inequalities(config);
  else if (suite == "energy_match")
    rows = suite_energy_match(config);
  else
    throw std::invalid_argument("unknown suite: " + suite);
  return emit_rows(rows, out);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-bubble toolkit for the critical Choquard equation"};
  app.require_subcommand(1);

  RunConfig config;
  std::string config_path, potential_inline, grid = "1x1", suite = "riesz",
              case_name = "max";

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--N", config.N, "dimension (5..8)");
  app.add_option("--mu", config.mu, "Riesz exponent in (0,4]");
  app.add_option("--k", config.k, "number of bubbles");
  app.add_option("--potential", potential_inline, "potential JSON, inline");
  app.add_option("--tol", config.tol, "quadrature tolerance");
  app.add_option("--budget", config.budget, "evaluation budget per integral");
  app.add_option("--seed", config.seed, "RNG seed");
  app.add_option("--out", config.out_path, "output path (default stdout)");
  app.add_option("--L0", config.L0, "lambda window lower constant");
  app.add_option("--L1", config.L1, "lambda window upper constant");
  app.add_option("--r0", config.r0, "domain center (default: from potential)");
  app.add_option("--delta", config.delta, "domain half width (default 0.1 r0)");
  app.add_option("--theta", config.theta, "Lambda window exponent theta");
  app.add_option("--eta", config.eta, "saddle bracket margin");
  app.add_option("--alpha-scale", config.alpha_scale,
                 "bubble amplitude scale (kernel suite sensitivity)");

  CLI::App* sc_constants = app.add_subcommand("constants", "closed-form constants vs oracles");
  CLI::App* sc_scan = app.add_subcommand("scan", "reduced-energy grid scan");
  sc_scan->add_option("--grid", grid, "RxL grid, e.g. 21x21");
  CLI::App* sc_crit = app.add_subcommand("critical-point", "locate the predicted critical point");
  sc_crit->add_option("--case", case_name, "max or saddle");
  CLI::App* sc_verify = app.add_subcommand("verify", "run a verification suite");
  sc_verify->add_option("--suite", suite,
                        "riesz|interaction|slope|kernel|inequalities|energy_match");

  // The config file is the base layer; flags parsed afterwards override it.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      path = arg.substr(9);
    if (!path.empty()) {
      try {
        config = RunConfig::from_json_file(path);
      } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
      }
      break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!potential_inline.empty()) config.potential_json = potential_inline;

    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!config.out_path.empty()) {
      file_out.open(config.out_path);
      if (!file_out) {
        std::cerr << "i/o error: cannot open " << config.out_path << "\n";
        return 3;
      }
      out = &file_out;
    }

    int rc = 0;
    if (sc_constants->parsed()) {
      rc = cmd_constants(config, *out);
    } else if (sc_scan->parsed()) {
      const auto xpos = grid.find('x');
      if (xpos == std::string::npos)
        throw std::invalid_argument("grid must be RxL, e.g. 21x21");
      const int r_steps = std::stoi(grid.substr(0, xpos));
      const int l_steps = std::stoi(grid.substr(xpos + 1));
      rc = cmd_scan(config, r_steps, l_steps, *out);
    } else if (sc_crit->parsed()) {
      CriticalCase which;
      if (case_name == "max")
        which = CriticalCase::max;
      else if (case_name == "saddle")
        which = CriticalCase::saddle;
      else
        throw std::invalid_argument("--case must be max or saddle");
      rc = cmd_critical_point(config, which, *out);
    } else if (sc_verify->parsed()) {
      rc = cmd_verify(config, suite, *out);
    }
    out->flush();
    if (!config.out_path.empty() && !file_out) return 3;
    return rc;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis not met: " << e.what() << "\n";
    return 4;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace choquard
