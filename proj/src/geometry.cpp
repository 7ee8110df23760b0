#include "choquard/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace choquard {

LambdaWindow::LambdaWindow(int N, double l0, double l1) : L0(l0), L1(l1) {
  if (N < 5) throw std::domain_error("LambdaWindow: requires N >= 5");
  if (N == 4) throw std::domain_error("LambdaWindow: N = 4 degenerate");
  if (!(l0 > 0.0) || !(l1 > l0))
    throw std::invalid_argument("LambdaWindow: requires 0 < L0 < L1");
  exponent = (N - 2.0) / (N - 4.0);
}

double LambdaWindow::lo(int k) const { return L0 * std::pow(k, exponent); }
double LambdaWindow::hi(int k) const { return L1 * std::pow(k, exponent); }
bool LambdaWindow::contains(double lambda, int k) const {
  return lambda >= lo(k) && lambda <= hi(k);
}

std::vector<Point> polygon_centers(int N, int k, double r) {
  std::vector<Point> centers;
  centers.reserve(k);
  for (int j = 1; j <= k; ++j) {
    Point xi(N);
    const double theta = 2.0 * M_PI * (j - 1) / k;
    xi[0] = r * std::cos(theta);
    xi[1] = r * std::sin(theta);
    centers.push_back(xi);
  }
  return centers;
}

BubbleConfig::BubbleConfig(const ProblemParams& p, int k_in, double r_in,
                           double lambda_in)
    : params(p), k(k_in), r(r_in), lambda(lambda_in) {
  if (k < 1) throw std::invalid_argument("BubbleConfig: requires k >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("BubbleConfig: requires r > 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument("BubbleConfig: requires lambda > 0");
  alpha = alpha_coeff(params);
  centers = polygon_centers(params.N, k, r);
}

std::string bubble_config_to_json(const BubbleConfig& config) {
  const nlohmann::json j = {{"N", config.params.N},
                            {"mu", config.params.mu},
                            {"k", config.k},
                            {"r", config.r},
                            {"lambda", config.lambda}};
  return j.dump();
}

BubbleConfig bubble_config_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const ProblemParams params(j.at("N").get<int>(), j.at("mu").get<double>());
  return BubbleConfig(params, j.at("k").get<int>(), j.at("r").get<double>(),
                      j.at("lambda").get<double>());
}

double bubble_eval(const ProblemParams& params, double alpha, double lambda,
                   const Point& xi, const Point& x) {
  const double t = 1.0 + lambda * lambda * dist2(x, xi);
  return alpha * std::pow(lambda, 0.5 * (params.N - 2)) *
         std::pow(t, -0.5 * (params.N - 2));
}

double ansatz_eval(const BubbleConfig& config, const Point& x) {
  double s = 0.0;
  for (const Point& xi : config.centers)
    s += bubble_eval(config.params, config.alpha, config.lambda, xi, x);
  return s;
}

std::vector<double> ansatz_components(const BubbleConfig& config,
                                      const Point& x) {
  std::vector<double> out;
  out.reserve(config.k);
  for (const Point& xi : config.centers)
    out.push_back(bubble_eval(config.params, config.alpha, config.lambda, xi, x));
  return out;
}

std::pair<double, double> psi_derivatives(const BubbleConfig& config, int j,
                                          const Point& x) {
  if (j < 1 || j > config.k)
    throw std::invalid_argument("psi_derivatives: j out of range");
  const int N = config.params.N;
  const double lambda = config.lambda;
  const double alpha = config.alpha;
  const Point& xi = config.centers[j - 1];
  const double w = dist2(x, xi);
  const double t = 1.0 + lambda * lambda * w;

  // dU/dxi_m = alpha (N-2) lambda^{(N+2)/2} (x_m - xi_m) t^{-N/2}; the center
  // moves along xi_j / r as r varies.
  double radial_proj = 0.0;
  for (int m = 0; m < 2; ++m) radial_proj += (x[m] - xi[m]) * xi[m] / config.r;
  const double psi1 = alpha * (N - 2.0) * std::pow(lambda, 0.5 * (N + 2)) *
                      std::pow(t, -0.5 * N) * radial_proj;

  const double psi2 = alpha * 0.5 * (N - 2.0) * std::pow(lambda, 0.5 * (N - 4)) *
                      (1.0 - lambda * lambda * w) * std::pow(t, -0.5 * N);
  return {psi1, psi2};
}

double kernel_eval(const ProblemParams& params, double alpha, int i,
                   const Point& x) {
  const int N = params.N;
  if (i < 1 || i > N + 1) throw std::invalid_argument("kernel_eval: i out of range");
  const double t = 1.0 + x.norm2();
  if (i <= N) {
    return -alpha * (N - 2.0) * x[i - 1] * std::pow(t, -0.5 * N);
  }
  return alpha * 0.5 * (N - 2.0) * (1.0 - x.norm2()) * std::pow(t, -0.5 * N);
}

SectorDomain::SectorDomain(int j, const BubbleConfig& c) : index(j), config(&c) {
  if (j < 1 || j > c.k) throw std::invalid_argument("SectorDomain: bad index");
}

namespace {

// Raw angular test, no tie-break.
bool sector_angle_ok(const BubbleConfig& c, int j, const Point& x) {
  const double xp = std::hypot(x[0], x[1]);
  if (xp == 0.0) return j == 1;  // convention: the axis belongs to sector 1
  const Point& xi = c.centers[j - 1];
  const double cosang = (x[0] * xi[0] + x[1] * xi[1]) / (xp * c.r);
  return cosang >= std::cos(M_PI / c.k);
}

}  // namespace

bool sector_contains(const SectorDomain& domain, const Point& x) {
  const BubbleConfig& c = *domain.config;
  if (!sector_angle_ok(c, domain.index, x)) return false;
  // Smallest qualifying index wins on boundaries.
  for (int j = 1; j < domain.index; ++j)
    if (sector_angle_ok(c, j, x)) return false;
  return true;
}

}  // namespace choquard
