#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace choquard {

inline constexpr int kMaxDim = 8;

// A point of R^N for runtime N <= 8.  Value type, cheap to copy; all
// geometry below works on these rather than heap vectors.
class Point {
 public:
  Point() = default;
  explicit Point(int dim, double fill = 0.0) : n_(dim) {
    if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("Point: bad dim");
    x_.fill(0.0);
    for (int i = 0; i < dim; ++i) x_[i] = fill;
  }
  Point(std::initializer_list<double> v) : n_(static_cast<int>(v.size())) {
    if (n_ > kMaxDim) throw std::invalid_argument("Point: bad dim");
    x_.fill(0.0);
    int i = 0;
    for (double d : v) x_[i++] = d;
  }

  int dim() const { return n_; }
  double operator[](int i) const { return x_[i]; }
  double& operator[](int i) { return x_[i]; }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < n_; ++i) x_[i] += o.x_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < n_; ++i) x_[i] -= o.x_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < n_; ++i) x_[i] *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += x_[i] * x_[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend double dot(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < a.n_; ++i) s += a.x_[i] * b.x_[i];
    return s;
  }
  friend double dist2(const Point& a, const Point& b) {
    double s = 0.0;
    for (int i = 0; i < a.n_; ++i) {
      const double d = a.x_[i] - b.x_[i];
      s += d * d;
    }
    return s;
  }
  friend double dist(const Point& a, const Point& b) {
    return std::sqrt(dist2(a, b));
  }

 private:
  std::array<double, kMaxDim> x_{};
  int n_ = 0;
};

}  // namespace choquard
