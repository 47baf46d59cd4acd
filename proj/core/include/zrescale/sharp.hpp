#pragma once

#include "zrescale/expr.hpp"
#include "zrescale/types.hpp"

namespace zrescale {

/// f^#(z) together with the quantities it is built from. The closed form
/// is value = |Df(z)| / (1 + |f(z)|^2); the Cauchy-Schwarz identity
/// (1 + |f|^2) f^# = |Df| holds by construction.
struct SharpValue {
  double value = 0.0;
  double gradient_norm = 0.0;
  double abs_f = 0.0;
};

/// Levi form of log(1 + |f|^2) at z in direction v (v need not be unit):
/// |<Df(z), v>|^2 / (1 + |f(z)|^2)^2. Always >= 0.
double levi_form(const Expr& f, const CPoint& z, const CPoint& v);

/// Sharp derivative by the closed form. The supremum over unit directions
/// of sqrt(levi_form) is attained at v* = conj(Df)/|Df|.
SharpValue sharp(const Expr& f, const CPoint& z);

/// Validation oracle for the supremum definition: the maximum of
/// sqrt(levi_form(f, z, v)) over the analytic direction v* and
/// `num_samples` seeded uniform random unit directions. Returns 0 without
/// sampling when |Df(z)| = 0.
double sharp_via_direction_sup(const Expr& f, const CPoint& z,
                               int num_samples, unsigned long long seed);

inline double levi_form(const ExprPtr& f, const CPoint& z, const CPoint& v) {
  return levi_form(*f, z, v);
}
inline SharpValue sharp(const ExprPtr& f, const CPoint& z) { return sharp(*f, z); }
inline double sharp_via_direction_sup(const ExprPtr& f, const CPoint& z,
                                      int num_samples, unsigned long long seed) {
  return sharp_via_direction_sup(*f, z, num_samples, seed);
}

}  // namespace zrescale
