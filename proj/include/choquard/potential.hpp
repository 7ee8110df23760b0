#pragma once

#include <string>
#include <vector>

namespace choquard {

// Bounded nonnegative radial potential V(|x|) with derivative access and the
// Pohozaev profile P(r) = r^2 V(r).  Families:
//   constant       V = a
//   gaussian_bump  V = a + b exp(-(r-r0)^2/(2 w^2))
//   gaussian_well  V = a + b (1 - exp(-(r-r0)^2/(2 w^2)))
//   tabulated      monotone-cubic interpolation of (r, V) samples
class RadialPotential {
 public:
  enum class Family { constant, gaussian_bump, gaussian_well, tabulated };

  static RadialPotential constant(double a);
  static RadialPotential gaussian_bump(double a, double b, double r0, double w);
  static RadialPotential gaussian_well(double a, double b, double r0, double w);
  // Samples must have strictly increasing r and nonnegative V.
  static RadialPotential tabulated(std::vector<double> r, std::vector<double> v);

  // JSON form, e.g. {"family":"gaussian_bump","a":0.1,"b":1.0,"r0":1.0,"w":0.2}
  // or {"family":"tabulated","r":[...],"v":[...]}.
  static RadialPotential from_json(const std::string& text);
  std::string to_json() const;

  // CSV with two columns r,V (header optional), strictly increasing r.
  static RadialPotential tabulated_from_csv(const std::string& path);

  double value(double r) const;              // V(r)
  double derivative(double r) const;         // V'(r)
  double second_derivative(double r) const;  // V''(r)
  double profile(double r) const { return r * r * value(r); }
  double profile_derivative(double r) const {
    return 2.0 * r * value(r) + r * r * derivative(r);
  }

  Family family() const { return family_; }
  bool is_constant() const { return family_ == Family::constant; }

 private:
  RadialPotential() = default;

  Family family_ = Family::constant;
  double a_ = 0.0, b_ = 0.0, r0_ = 1.0, w_ = 1.0;
  // Tabulated data and Fritsch-Carlson slopes.
  std::vector<double> tr_, tv_, tm_;
};

}  // namespace choquard
