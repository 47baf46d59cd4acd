#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace zrescale {

using Complex = std::complex<double>;

/// A point in C^n, stored as n complex coordinates.
using CPoint = std::vector<Complex>;

inline double norm_sq(const CPoint& p) {
  double s = 0.0;
  for (const Complex& c : p) s += std::norm(c);
  return s;
}

/// Euclidean norm |p| on C^n.
inline double point_norm(const CPoint& p) { return std::sqrt(norm_sq(p)); }

inline bool is_finite(Complex c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

inline bool is_finite(const CPoint& p) {
  for (const Complex& c : p)
    if (!is_finite(c)) return false;
  return true;
}

inline CPoint origin(std::size_t n) { return CPoint(n, Complex(0.0, 0.0)); }

/// Distance |a - b| between two points of equal dimension.
inline double point_distance(const CPoint& a, const CPoint& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

/// Closed ball {|z - center| <= radius} in C^n.
struct Ball {
  CPoint center;
  double radius = 1.0;

  std::size_t dimension() const { return center.size(); }
  bool contains(const CPoint& z, double slack = 0.0) const {
    return point_distance(z, center) <= radius + slack;
  }
};

}  // namespace zrescale
