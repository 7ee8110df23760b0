#include "choquard/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace choquard {

namespace {

void check_nonneg(double a, double b, const char* family) {
  if (a < 0.0 || a + b < 0.0 || b < 0.0)
    throw std::invalid_argument(std::string(family) +
                                ": potential must be nonnegative");
}

}  // namespace

RadialPotential RadialPotential::constant(double a) {
  if (a < 0.0) throw std::invalid_argument("constant: requires a >= 0");
  RadialPotential p;
  p.family_ = Family::constant;
  p.a_ = a;
  return p;
}

RadialPotential RadialPotential::gaussian_bump(double a, double b, double r0,
                                               double w) {
  check_nonneg(a, b, "gaussian_bump");
  if (!(r0 > 0.0) || !(w > 0.0))
    throw std::invalid_argument("gaussian_bump: requires r0 > 0, w > 0");
  RadialPotential p;
  p.family_ = Family::gaussian_bump;
  p.a_ = a;
  p.b_ = b;
  p.r0_ = r0;
  p.w_ = w;
  return p;
}

RadialPotential RadialPotential::gaussian_well(double a, double b, double r0,
                                               double w) {
  check_nonneg(a, b, "gaussian_well");
  if (!(r0 > 0.0) || !(w > 0.0))
    throw std::invalid_argument("gaussian_well: requires r0 > 0, w > 0");
  RadialPotential p;
  p.family_ = Family::gaussian_well;
  p.a_ = a;
  p.b_ = b;
  p.r0_ = r0;
  p.w_ = w;
  return p;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r,
                                           std::vector<double> v) {
  if (r.size() != v.size() || r.size() < 2)
    throw std::invalid_argument("tabulated: need >= 2 matching samples");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0 && !(r[i] > r[i - 1]))
      throw std::invalid_argument("tabulated: r must be strictly increasing");
    if (v[i] < 0.0)
      throw std::invalid_argument("tabulated: V must be nonnegative");
  }
  RadialPotential p;
  p.family_ = Family::tabulated;
  const std::size_t n = r.size();
  // Fritsch-Carlson monotone cubic slopes; keeps interpolation bounded and
  // shape-preserving so V stays nonnegative between samples.
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    m[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double va = m[i] / d[i], vb = m[i + 1] / d[i];
    const double s = va * va + vb * vb;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m[i] = tau * va * d[i];
      m[i + 1] = tau * vb * d[i];
    }
  }
  p.tr_ = std::move(r);
  p.tv_ = std::move(v);
  p.tm_ = std::move(m);
  return p;
}

RadialPotential RadialPotential::tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("tabulated_from_csv: cannot open " + path);
  std::vector<double> r, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (ss >> a >> b) {
      r.push_back(a);
      v.push_back(b);
    }
  }
  return tabulated(std::move(r), std::move(v));
}

RadialPotential RadialPotential::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "constant") return constant(j.at("a").get<double>());
  if (fam == "gaussian_bump")
    return gaussian_bump(j.at("a").get<double>(), j.at("b").get<double>(),
                         j.at("r0").get<double>(), j.at("w").get<double>());
  if (fam == "gaussian_well")
    return gaussian_well(j.at("a").get<double>(), j.at("b").get<double>(),
                         j.at("r0").get<double>(), j.at("w").get<double>());
  if (fam == "tabulated")
    return tabulated(j.at("r").get<std::vector<double>>(),
                     j.at("v").get<std::vector<double>>());
  throw std::invalid_argument("RadialPotential: unknown family " + fam);
}

std::string RadialPotential::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case Family::constant:
      j = {{"family", "constant"}, {"a", a_}};
      break;
    case Family::gaussian_bump:
      j = {{"family", "gaussian_bump"}, {"a", a_}, {"b", b_}, {"r0", r0_}, {"w", w_}};
      break;
    case Family::gaussian_well:
      j = {{"family", "gaussian_well"}, {"a", a_}, {"b", b_}, {"r0", r0_}, {"w", w_}};
      break;
    case Family::tabulated:
      j = {{"family", "tabulated"}, {"r", tr_}, {"v", tv_}};
      break;
  }
  return j.dump();
}

double RadialPotential::value(double r) const {
  switch (family_) {
    case Family::constant:
      return a_;
    case Family::gaussian_bump: {
      const double z = (r - r0_) / w_;
      return a_ + b_ * std::exp(-0.5 * z * z);
    }
    case Family::gaussian_well: {
      const double z = (r - r0_) / w_;
      return a_ + b_ * (1.0 - std::exp(-0.5 * z * z));
    }
    case Family::tabulated: {
      if (r <= tr_.front()) return tv_.front();
      if (r >= tr_.back()) return tv_.back();
      auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - tr_.begin()) - 1;
      const double h = tr_[i + 1] - tr_[i];
      const double t = (r - tr_[i]) / h;
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
      const double h10 = t * (1 - t) * (1 - t);
      const double h01 = t * t * (3 - 2 * t);
      const double h11 = t * t * (t - 1);
      return h00 * tv_[i] + h10 * h * tm_[i] + h01 * tv_[i + 1] +
             h11 * h * tm_[i + 1];
    }
  }
  return 0.0;
}

double RadialPotential::derivative(double r) const {
  switch (family_) {
    case Family::constant:
      return 0.0;
    case Family::gaussian_bump: {
      const double z = (r - r0_) / w_;
      return -b_ * z / w_ * std::exp(-0.5 * z * z);
    }
    case Family::gaussian_well: {
      const double z = (r - r0_) / w_;
      return b_ * z / w_ * std::exp(-0.5 * z * z);
    }
    case Family::tabulated: {
      if (r <= tr_.front() || r >= tr_.back()) return 0.0;
      auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - tr_.begin()) - 1;
      const double h = tr_[i + 1] - tr_[i];
      const double t = (r - tr_[i]) / h;
      const double dh00 = 6 * t * t - 6 * t;
      const double dh10 = 3 * t * t - 4 * t + 1;
      const double dh01 = -6 * t * t + 6 * t;
      const double dh11 = 3 * t * t - 2 * t;
      return (dh00 * tv_[i] + dh01 * tv_[i + 1]) / h + dh10 * tm_[i] +
             dh11 * tm_[i + 1];
    }
  }
  return 0.0;
}

double RadialPotential::second_derivative(double r) const {
  switch (family_) {
    case Family::constant:
      return 0.0;
    case Family::gaussian_bump: {
      const double z = (r - r0_) / w_;
      return b_ / (w_ * w_) * (z * z - 1.0) * std::exp(-0.5 * z * z);
    }
    case Family::gaussian_well: {
      const double z = (r - r0_) / w_;
      return -b_ / (w_ * w_) * (z * z - 1.0) * std::exp(-0.5 * z * z);
    }
    case Family::tabulated: {
      if (r <= tr_.front() || r >= tr_.back()) return 0.0;
      auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - tr_.begin()) - 1;
      const double h = tr_[i + 1] - tr_[i];
      const double t = (r - tr_[i]) / h;
      const double d00 = 12 * t - 6;
      const double d10 = 6 * t - 4;
      const double d01 = -12 * t + 6;
      const double d11 = 6 * t - 2;
      return (d00 * tv_[i] + d01 * tv_[i + 1]) / (h * h) +
             (d10 * tm_[i] + d11 * tm_[i + 1]) / h;
    }
  }
  return 0.0;
}

}  // namespace choquard
