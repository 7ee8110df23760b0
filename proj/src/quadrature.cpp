#include "choquard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>

#include "choquard/special.hpp"

namespace choquard {

const QuadratureResult& QuadratureResult::require() const {
  if (!converged)
    throw std::runtime_error("quadrature: evaluation budget exceeded");
  return *this;
}

namespace {

constexpr double kAbsFloor = 1e-300;

bool tol_met(double err, double val, double tol) {
  return err <= std::max(tol * std::abs(val), kAbsFloor);
}

// ---------------------------------------------------------------------------
// 1D adaptive Gauss-Kronrod 7-15 (QUADPACK dqk15 nodes/weights).

constexpr double kXgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double kWg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc, resg = kWg[3] * fc, resabs = std::abs(resk);
  double fv[15];
  fv[7] = fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = f(c - dx), f2 = f(c + dx);
    fv[i] = f1;
    fv[14 - i] = f2;
    resk += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
    resabs += kWgk[i] * (std::abs(f1) + std::abs(f2));
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  resasc *= std::abs(h);
  resabs *= std::abs(h);
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {a, b, resk * h, err};
}

// Adaptive driver over an initial list of intervals.
QuadratureResult adapt_1d(const std::function<double(double)>& f,
                          const std::vector<std::pair<double, double>>& init,
                          double tol, std::int64_t budget) {
  QuadratureResult out;
  std::priority_queue<Interval> heap;
  double total = 0.0, toterr = 0.0;
  for (auto [a, b] : init) {
    Interval iv = gk15(f, a, b);
    out.evaluations += 15;
    total += iv.value;
    toterr += iv.error;
    heap.push(iv);
  }
  while (!tol_met(toterr, total, tol)) {
    if (out.evaluations + 30 > budget || heap.empty()) {
      out.converged = false;
      break;
    }
    Interval worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {
      // Interval at roundoff resolution: retire it (its contribution stays in
      // the totals) and keep refining the rest.
      continue;
    }
    Interval l = gk15(f, worst.a, m), r = gk15(f, m, worst.b);
    out.evaluations += 30;
    total += l.value + r.value - worst.value;
    toterr += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }
  out.value = total;
  out.abs_error_estimate = toterr;
  return out;
}

// ---------------------------------------------------------------------------
// Genz-Malik degree-7 cubature with embedded degree-5 error estimate, for
// dimensions 2 and 3.  Weights verified exactly against monomial moments.

constexpr double kGmL2 = 0.35856858280031809199064515390793749545406372969943071;  // sqrt(9/70)
constexpr double kGmL4 = 0.94868329805051379959966806332981556011586654179756505;  // sqrt(9/10)
constexpr double kGmL5 = 0.68824720161168529772162873429362352512689535661564885;  // sqrt(9/19)

struct GmRule {
  double w1, w2, w3, w4, w5;
  double e1, e2, e3, e4;
  int npts;
};

GmRule gm_rule(int d) {
  const double s = std::pow(2.0, d);
  GmRule r;
  r.w1 = s * (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0;
  r.w2 = s * 980.0 / 6561.0;
  r.w3 = s * (1820.0 - 400.0 * d) / 19683.0;
  r.w4 = s * 200.0 / 19683.0;
  r.w5 = 6859.0 / 19683.0;
  r.e1 = s * (729.0 - 950.0 * d + 50.0 * d * d) / 729.0;
  r.e2 = s * 245.0 / 486.0;
  r.e3 = s * (265.0 - 100.0 * d) / 1458.0;
  r.e4 = s * 25.0 / 729.0;
  r.npts = 1 + 4 * d + 2 * d * (d - 1) + (1 << d);
  return r;
}

using CubeFn = std::function<double(const double*)>;

struct Box {
  double lo[3], hi[3];
  double value, error;
  int split_dim;
  bool operator<(const Box& o) const { return error < o.error; }
};

void gm_eval(const CubeFn& f, int d, Box& box) {
  static const GmRule rules[2] = {gm_rule(2), gm_rule(3)};
  const GmRule& R = rules[d - 2];
  double c[3], h[3];
  double halfvol = 1.0;
  for (int i = 0; i < d; ++i) {
    c[i] = 0.5 * (box.lo[i] + box.hi[i]);
    h[i] = 0.5 * (box.hi[i] - box.lo[i]);
    halfvol *= h[i];
  }
  double p[3];
  auto at = [&](const double* off) {
    for (int i = 0; i < d; ++i) p[i] = c[i] + h[i] * off[i];
    return f(p);
  };

  double off[3] = {0, 0, 0};
  const double f0 = at(off);
  double sum2 = 0.0, sum3 = 0.0, sum4 = 0.0, sum5 = 0.0;
  double fdiff[3] = {0, 0, 0};
  const double ratio = (kGmL2 * kGmL2) / (kGmL4 * kGmL4);
  for (int i = 0; i < d; ++i) {
    off[0] = off[1] = off[2] = 0.0;
    off[i] = kGmL2;
    const double a1 = at(off);
    off[i] = -kGmL2;
    const double a2 = at(off);
    off[i] = kGmL4;
    const double b1 = at(off);
    off[i] = -kGmL4;
    const double b2 = at(off);
    sum2 += a1 + a2;
    sum3 += b1 + b2;
    fdiff[i] = std::abs(b1 + b2 - 2.0 * f0 - ratio * (a1 + a2 - 2.0 * f0));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2) {
          off[0] = off[1] = off[2] = 0.0;
          off[i] = si * kGmL4;
          off[j] = sj * kGmL4;
          sum4 += at(off);
        }
  const int corners = 1 << d;
  for (int m = 0; m < corners; ++m) {
    for (int i = 0; i < d; ++i) off[i] = ((m >> i) & 1) ? kGmL5 : -kGmL5;
    sum5 += at(off);
  }

  const double res7 =
      halfvol * (R.w1 * f0 + R.w2 * sum2 + R.w3 * sum3 + R.w4 * sum4 + R.w5 * sum5);
  const double res5 =
      halfvol * (R.e1 * f0 + R.e2 * sum2 + R.e3 * sum3 + R.e4 * sum4);
  box.value = res7;
  box.error = std::abs(res7 - res5);
  int dim = 0;
  double best = -1.0;
  for (int i = 0; i < d; ++i) {
    const double score = fdiff[i] * h[i];  // prefer wide dims with structure
    if (score > best) {
      best = score;
      dim = i;
    }
  }
  box.split_dim = dim;
}

QuadratureResult adapt_nd(const CubeFn& f, int d, std::vector<Box> init,
                          double tol, std::int64_t budget) {
  static const GmRule rules[2] = {gm_rule(2), gm_rule(3)};
  const int npts = rules[d - 2].npts;
  QuadratureResult out;
  std::priority_queue<Box> heap;
  double total = 0.0, toterr = 0.0;
  for (Box& b : init) {
    gm_eval(f, d, b);
    out.evaluations += npts;
    total += b.value;
    toterr += b.error;
    heap.push(b);
  }
  while (!tol_met(toterr, total, tol)) {
    if (out.evaluations + 2 * npts > budget || heap.empty()) {
      out.converged = false;
      break;
    }
    Box worst = heap.top();
    heap.pop();
    int sd = worst.split_dim;
    if (0.5 * (worst.lo[sd] + worst.hi[sd]) <= worst.lo[sd] ||
        0.5 * (worst.lo[sd] + worst.hi[sd]) >= worst.hi[sd]) {
      // Preferred dimension at roundoff width; fall back to the widest one,
      // or retire the box if none is splittable.
      sd = 0;
      for (int i = 1; i < d; ++i)
        if (worst.hi[i] - worst.lo[i] > worst.hi[sd] - worst.lo[sd]) sd = i;
    }
    const double m = 0.5 * (worst.lo[sd] + worst.hi[sd]);
    if (m <= worst.lo[sd] || m >= worst.hi[sd]) continue;
    Box l = worst, r = worst;
    l.hi[sd] = m;
    r.lo[sd] = m;
    gm_eval(f, d, l);
    gm_eval(f, d, r);
    out.evaluations += 2 * npts;
    total += l.value + r.value - worst.value;
    toterr += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
  }
  out.value = total;
  out.abs_error_estimate = toterr;
  return out;
}

std::vector<Box> boxes_from_grid(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  std::vector<Box> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      Box b{};
      b.lo[0] = xs[i];
      b.hi[0] = xs[i + 1];
      b.lo[1] = ys[j];
      b.hi[1] = ys[j + 1];
      out.push_back(b);
    }
  return out;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-13; }),
          v.end());
  return v;
}

// Chain-refines the box containing `target` toward it: repeatedly bisects the
// dimension that is widest relative to its minimum width, keeps the half with
// the target and appends the sibling.  Leaves a geometrically graded stack of
// cells so that structure of size min_width[i] around the target is straddled
// by cell boundaries.
void grade_toward(std::vector<Box>& boxes, int d, const double* target,
                  const double* min_width) {
  // Locate the box whose closure contains the target.
  std::size_t idx = boxes.size();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    bool inside = true;
    for (int j = 0; j < d; ++j)
      if (target[j] < boxes[i].lo[j] - 1e-14 || target[j] > boxes[i].hi[j] + 1e-14)
        inside = false;
    if (inside) {
      idx = i;
      break;
    }
  }
  if (idx == boxes.size()) return;
  for (int guard = 0; guard < 400; ++guard) {
    Box& b = boxes[idx];
    int dim = -1;
    double best = 1.0;
    for (int j = 0; j < d; ++j) {
      if (!(min_width[j] > 0.0)) continue;
      const double ratio = (b.hi[j] - b.lo[j]) / min_width[j];
      if (ratio > best) {
        best = ratio;
        dim = j;
      }
    }
    if (dim < 0) break;
    const double m = 0.5 * (b.lo[dim] + b.hi[dim]);
    if (m <= b.lo[dim] || m >= b.hi[dim]) break;
    Box sibling = b;
    if (target[dim] <= m) {
      sibling.lo[dim] = m;
      b.hi[dim] = m;
    } else {
      sibling.hi[dim] = m;
      b.lo[dim] = m;
    }
    boxes.push_back(sibling);  // note: may invalidate b; re-take reference
  }
}

}  // namespace

QuadratureResult integrate_radial(const std::function<double(double)>& f, int N,
                                  double tol, std::int64_t budget,
                                  double feature_scale) {
  if (N < 1) throw std::domain_error("integrate_radial: requires N >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_radial: tol > 0");
  const double area = sphere_area(N - 1);
  // [0,1] directly, [1,inf) via rho = 1/u.
  auto g = [&](double u) -> double {
    if (u <= 0.0) return 0.0;
    const double rho = 1.0 / u;
    return f(rho) * std::pow(rho, N - 1) / (u * u);
  };
  auto h = [&](double rho) { return f(rho) * std::pow(rho, N - 1); };
  std::vector<std::pair<double, double>> head_iv;
  if (feature_scale > 0.0 && feature_scale < 0.25) {
    double lo = 0.0, edge = feature_scale;
    while (edge < 1.0) {
      head_iv.emplace_back(lo, edge);
      lo = edge;
      edge *= 4.0;
    }
    head_iv.emplace_back(lo, 1.0);
  } else {
    head_iv.emplace_back(0.0, 1.0);
  }
  QuadratureResult head = adapt_1d(h, head_iv, 0.5 * tol, budget / 2);
  QuadratureResult tail = adapt_1d(g, {{0.0, 1.0}}, 0.5 * tol, budget / 2);
  QuadratureResult out;
  out.value = area * (head.value + tail.value);
  out.abs_error_estimate = area * (head.abs_error_estimate + tail.abs_error_estimate);
  out.evaluations = head.evaluations + tail.evaluations;
  out.converged = head.converged && tail.converged &&
                  tol_met(out.abs_error_estimate, out.value, tol);
  return out;
}

QuadratureResult integrate_two_center(
    const std::function<double(double, double)>& g, const Point& a,
    const Point& b, int N, double tol, std::int64_t budget,
    double feature_scale) {
  if (N < 3) throw std::domain_error("integrate_two_center: requires N >= 3");
  const double d = dist(a, b);
  if (!(d > 0.0))
    throw std::invalid_argument("integrate_two_center: coincident centers");
  const double area = sphere_area(N - 2);
  const double scale = std::max(d, 1.0);

  // Variables: s = scale v/(1-v) (axis-aligned in s), and c in [0,1] with
  // t = |s-d| + 2 min(s,d) c.  rho^2 = ((s+t)^2-d^2)(d^2-(s-t)^2)/(4d^2).
  auto integrand = [&](const double* u) -> double {
    const double v = u[0], cc = u[1];
    if (v <= 0.0 || v >= 1.0) return 0.0;
    const double s = scale * v / (1.0 - v);
    const double ds = scale / ((1.0 - v) * (1.0 - v));
    const double width = 2.0 * std::min(s, d);
    const double t = std::abs(s - d) + width * cc;
    if (s <= 0.0 || t <= 0.0) return 0.0;
    const double q1 = (s + t) * (s + t) - d * d;
    const double q2 = d * d - (s - t) * (s - t);
    if (q1 <= 0.0 || q2 <= 0.0) return 0.0;
    const double rho = std::sqrt(q1) * std::sqrt(q2) / (2.0 * d);
    const double gv = g(s, t);
    if (gv == 0.0) return 0.0;
    return area * gv * (s * t / d) * std::pow(rho, N - 3) * width * ds;
  };

  // Cell edges aligned with the kink at s = d and graded toward s = 0.
  const double vd = d / (d + scale);
  std::vector<double> vs = sorted_unique(
      {0.0, vd / 16.0, vd / 4.0, vd / 2.0, vd, vd + (1.0 - vd) / 2.0, 1.0});
  std::vector<double> cs = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Box> init = boxes_from_grid(vs, cs);
  if (feature_scale > 0.0) {
    // Fine structure at s ~ feature_scale around center a (the whole v = 0
    // edge) and at t ~ feature_scale around center b (the corner (vd, 0)).
    const double vw = feature_scale / scale;
    {
      const double target[2] = {0.0, 0.5};
      const double minw[2] = {vw, 0.0};
      grade_toward(init, 2, target, minw);
    }
    {
      const double target[2] = {vd, 0.0};
      const double minw[2] = {vw, feature_scale / (2.0 * d)};
      grade_toward(init, 2, target, minw);
    }
  }
  return adapt_nd(integrand, 2, std::move(init), tol, budget);
}

QuadratureResult integrate_three_center(
    const std::function<double(double, double, double)>& g, const Point& a,
    const Point& b, const Point& c, int N, double tol, std::int64_t budget,
    double feature_scale) {
  if (N < 4) throw std::domain_error("integrate_three_center: requires N >= 4");
  const double dab = dist(a, b), dac = dist(a, c), dbc = dist(b, c);
  const double eps = 1e-13 * std::max({dab, dac, dbc, 1.0});
  // Duplicate centers degrade to a genuine two-center geometry.
  if (dab <= eps)
    return integrate_two_center([&](double s, double t) { return g(s, s, t); },
                                a, c, N, tol, budget, feature_scale);
  if (dac <= eps)
    return integrate_two_center([&](double s, double t) { return g(s, t, s); },
                                a, b, N, tol, budget, feature_scale);
  if (dbc <= eps)
    return integrate_two_center([&](double s, double t) { return g(s, t, t); },
                                a, b, N, tol, budget, feature_scale);

  // Orthonormal in-plane frame from the centers.
  const int dim = a.dim();
  Point e1 = b - a;
  e1 *= 1.0 / dab;
  Point ca = c - a;
  const double proj = dot(ca, e1);
  Point u = ca - proj * e1;
  double ulen = u.norm();
  if (ulen <= 1e-13 * std::max(dab, dac)) {
    // Collinear centers: any orthogonal direction completes the plane.
    int axis = 0;
    double best = std::abs(e1[0]);
    for (int i = 1; i < dim; ++i)
      if (std::abs(e1[i]) < best) {
        best = std::abs(e1[i]);
        axis = i;
      }
    Point ax(dim);
    ax[axis] = 1.0;
    u = ax - dot(ax, e1) * e1;
    ulen = u.norm();
  }
  Point e2 = u;
  e2 *= 1.0 / ulen;

  // Plane coordinates of the three centers.
  const double A1 = 0.0, A2 = 0.0;
  const double B1 = dab, B2 = 0.0;
  const double C1 = proj, C2 = dot(c - a, e2);

  const double L = std::max({dab, dac, dbc, 1.0});
  const double P0 = (A1 + B1 + C1) / 3.0, Q0 = (A2 + B2 + C2) / 3.0;
  const double area = sphere_area(N - 3);

  auto coord = [&](double w, double center) {
    return center + L * w / (1.0 - w * w);
  };
  auto dcoord = [&](double w) {
    const double t = 1.0 - w * w;
    return L * (1.0 + w * w) / (t * t);
  };
  auto inv_coord = [&](double p, double center) {
    // Solve p = center + L w/(1-w^2) for w in (-1,1).
    const double y = (p - center) / L;
    if (y == 0.0) return 0.0;
    // w = (sqrt(1+4y^2) - 1) / (2y)
    return (std::sqrt(1.0 + 4.0 * y * y) - 1.0) / (2.0 * y);
  };

  auto integrand = [&](const double* w) -> double {
    const double w1 = w[0], w2 = w[1], w3 = w[2];
    if (std::abs(w1) >= 1.0 || std::abs(w2) >= 1.0 || w3 <= 0.0 || w3 >= 1.0)
      return 0.0;
    const double p = coord(w1, P0), q = coord(w2, Q0);
    const double rho = L * w3 / (1.0 - w3);
    const double jac = dcoord(w1) * dcoord(w2) * (L / ((1.0 - w3) * (1.0 - w3)));
    const double rr = rho * rho;
    const double sa = std::sqrt((p - A1) * (p - A1) + (q - A2) * (q - A2) + rr);
    const double sb = std::sqrt((p - B1) * (p - B1) + (q - B2) * (q - B2) + rr);
    const double sc = std::sqrt((p - C1) * (p - C1) + (q - C2) * (q - C2) + rr);
    const double gv = g(sa, sb, sc);
    if (gv == 0.0) return 0.0;
    return area * gv * std::pow(rho, N - 3) * jac;
  };

  // Grid lines through the in-plane center coordinates so the singular points
  // sit at cell corners on the rho = 0 face.
  std::vector<double> ws1 = sorted_unique({-1.0, inv_coord(A1, P0), inv_coord(B1, P0),
                                           inv_coord(C1, P0), 0.0, 1.0});
  std::vector<double> ws2 = sorted_unique({-1.0, inv_coord(A2, Q0), inv_coord(B2, Q0),
                                           inv_coord(C2, Q0), 0.0, 1.0});
  std::vector<double> ws3 = {0.0, 0.25, 0.5, 1.0};
  std::vector<Box> init;
  for (std::size_t i = 0; i + 1 < ws1.size(); ++i)
    for (std::size_t j = 0; j + 1 < ws2.size(); ++j)
      for (std::size_t l = 0; l + 1 < ws3.size(); ++l) {
        Box bx{};
        bx.lo[0] = ws1[i];
        bx.hi[0] = ws1[i + 1];
        bx.lo[1] = ws2[j];
        bx.hi[1] = ws2[j + 1];
        bx.lo[2] = ws3[l];
        bx.hi[2] = ws3[l + 1];
        init.push_back(bx);
      }
  if (feature_scale > 0.0) {
    const double cpts[3][2] = {{A1, A2}, {B1, B2}, {C1, C2}};
    for (const auto& cp : cpts) {
      const double u1 = inv_coord(cp[0], P0), u2 = inv_coord(cp[1], Q0);
      const double target[3] = {u1, u2, 0.0};
      const double minw[3] = {feature_scale / dcoord(u1),
                              feature_scale / dcoord(u2), feature_scale / L};
      grade_toward(init, 3, target, minw);
    }
  }
  return adapt_nd(integrand, 3, std::move(init), tol, budget);
}

// ---------------------------------------------------------------------------
// Stratified importance-sampling Monte Carlo.

namespace {

double cauchy_density(int N, const Point& center, double scale, const Point& x) {
  // Multivariate t with one degree of freedom.
  static thread_local int cached_n = -1;
  static thread_local double cached_c = 0.0;
  if (cached_n != N) {
    cached_n = N;
    cached_c = std::exp(log_gamma_fn(0.5 * (N + 1)) -
                        0.5 * (N + 1) * std::log(M_PI));
  }
  const double z2 = dist2(x, center) / (scale * scale);
  return cached_c * std::pow(scale, -N) * std::pow(1.0 + z2, -0.5 * (N + 1));
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform() {
    // 53-bit uniform in (0,1).
    return ((gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }
  double normal() {
    // Box-Muller; implementation-defined std distributions are avoided so
    // that results are reproducible bit-for-bit for a fixed seed.
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

}  // namespace

double mc_mixture_density(const std::vector<McStratum>& strata, const Point& x) {
  double q = 0.0;
  for (const McStratum& s : strata)
    q += cauchy_density(x.dim(), s.center, s.scale, x);
  return q / strata.size();
}

QuadratureResult mc_double_convolution(
    const std::function<double(const Point&)>& F,
    const std::function<double(const Point&)>& G, double mu,
    const std::vector<McStratum>& strata_y,
    const std::vector<McStratum>& strata_x, double kernel_scale,
    std::int64_t samples, std::uint64_t seed) {
  if (strata_y.empty() || strata_x.empty())
    throw std::invalid_argument("mc_double_convolution: no strata");
  const int N = strata_y.front().center.dim();
  if (!(mu > 0.0) || !(mu < N))
    throw std::domain_error("mc_double_convolution: requires 0 < mu < N");
  const double R = kernel_scale;
  const double a = N - 1.0 - mu;  // radial density exponent on [0, R]
  const double w_head = (1.0 / (a + 1.0)) / (1.0 / (a + 1.0) + 1.0);
  const double norm = std::pow(R, a + 1.0) * (1.0 / (a + 1.0) + 1.0);
  const double area = sphere_area(N - 1);

  // Radial density: p(rho) = rho^a / norm on [0,R], R^a (R/rho)^2 / norm beyond.
  auto kernel_pdf = [&](double rho) -> double {
    if (rho <= 0.0) return 0.0;
    const double pr = (rho <= R) ? std::pow(rho, a)
                                 : std::pow(R, a) * (R / rho) * (R / rho);
    return pr / norm;
  };
  auto kernel_density = [&](const Point& u) -> double {
    const double rho = u.norm();
    if (rho <= 0.0) return 0.0;
    return kernel_pdf(rho) / (area * std::pow(rho, N - 1));
  };

  Rng rng(seed ^ 0xd1b54a32d192ed03ull);
  double sum = 0.0, sumsq = 0.0;
  QuadratureResult out;
  for (std::int64_t i = 0; i < samples; ++i) {
    // y from its mixture (component chosen uniformly keeps the estimator
    // unbiased for any sample count).
    const std::size_t cy = std::min<std::size_t>(
        strata_y.size() - 1,
        static_cast<std::size_t>(rng.uniform() * strata_y.size()));
    Point y = strata_y[cy].center;
    {
      const double denom = std::abs(rng.normal()) + 1e-300;
      for (int m = 0; m < N; ++m)
        y[m] += strata_y[cy].scale * rng.normal() / denom;
    }
    const double qy = mc_mixture_density(strata_y, y);

    // x: half from the strata_x mixture, half kernel-shifted around y.
    Point x(N);
    if (rng.uniform() < 0.5) {
      const std::size_t cx = std::min<std::size_t>(
          strata_x.size() - 1,
          static_cast<std::size_t>(rng.uniform() * strata_x.size()));
      x = strata_x[cx].center;
      const double denom = std::abs(rng.normal()) + 1e-300;
      for (int m = 0; m < N; ++m)
        x[m] += strata_x[cx].scale * rng.normal() / denom;
    } else {
      const double w = rng.uniform();
      double rho;
      if (w < w_head) {
        rho = R * std::pow(w / w_head, 1.0 / (a + 1.0));
      } else {
        rho = R / (1.0 - (w - w_head) / (1.0 - w_head));
      }
      Point dir(N);
      double dn = 0.0;
      do {
        for (int m = 0; m < N; ++m) dir[m] = rng.normal();
        dn = dir.norm();
      } while (dn == 0.0);
      x = y + (rho / dn) * dir;
    }
    const double qx =
        0.5 * mc_mixture_density(strata_x, x) + 0.5 * kernel_density(x - y);

    double h = 0.0;
    const double fy = F(y);
    if (fy != 0.0 && qy > 1e-280 && qx > 1e-280) {
      const double gx = G(x);
      if (gx != 0.0) {
        const double r = dist(x, y);
        if (r > 0.0) h = fy * gx * std::pow(r, -mu) / (qy * qx);
      }
    }
    sum += h;
    sumsq += h * h;
    out.evaluations += 2;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double s2 = std::max(0.0, (sumsq / n - mean * mean)) * n / (n - 1.0);
  out.value = mean;
  out.abs_error_estimate = std::sqrt(s2 / n);
  return out;
}

QuadratureResult monte_carlo_stratified(
    const std::function<double(const Point&)>& f,
    const std::vector<McStratum>& strata, std::int64_t samples_per_stratum,
    std::uint64_t seed) {
  if (strata.empty())
    throw std::invalid_argument("monte_carlo_stratified: no strata");
  if (samples_per_stratum < 2)
    throw std::invalid_argument("monte_carlo_stratified: need >= 2 samples");
  const int N = strata.front().center.dim();
  const std::size_t M = strata.size();

  QuadratureResult out;
  double value = 0.0, var = 0.0;
  for (std::size_t c = 0; c < M; ++c) {
    Rng rng(seed + 0x9e3779b97f4a7c15ull * (c + 1));
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < samples_per_stratum; ++i) {
      Point x = strata[c].center;
      const double denom = std::abs(rng.normal()) + 1e-300;
      for (int m = 0; m < N; ++m)
        x[m] += strata[c].scale * rng.normal() / denom;
      const double fx = f(x);
      double h = 0.0;
      if (fx != 0.0) {
        const double q = mc_mixture_density(strata, x);
        if (q < 1e-280) {
          out.bias_warning = true;
        } else {
          h = fx / q;
        }
      }
      sum += h;
      sumsq += h * h;
    }
    const double n = static_cast<double>(samples_per_stratum);
    const double mean = sum / n;
    const double s2 = std::max(0.0, (sumsq / n - mean * mean)) * n / (n - 1.0);
    value += mean / M;
    var += s2 / (M * M * n);
    out.evaluations += samples_per_stratum;
  }
  out.value = value;
  out.abs_error_estimate = std::sqrt(var);
  return out;
}

}  // namespace choquard
