#pragma once

#include <vector>

#include "zrescale/expr.hpp"
#include "zrescale/optimize.hpp"
#include "zrescale/types.hpp"

namespace zrescale {

/// Rescaling exponent. Values <= -1 are admitted only for zero-free
/// families.
struct Alpha {
  double value = 0.0;
};

/// Validates the admissible range and returns the strong type.
Alpha make_alpha(double value, bool zero_free);

/// The weighted functional
///   phi(t,z) = (1-j|z|)^(1+a) t^(1+a) (1+|f|^2) f^# / (1 + (1-j|z|)^(2a) t^(2a) |f|^2)
/// on t in [0,1], |z| <= 1/j. phi(0,z) = 0 and phi vanishes on |z| = 1/j.
/// Driving its max over the ball to 1 selects the rescaling data.
double weighted_functional(const Expr& f, long j, Alpha alpha, double t,
                           const CPoint& z);

/// Max of (1-j|z|)^(1+|a|) f^#(z) over |z| <= 1/j; never below the value
/// at the origin.
MaxResult weighted_max(const Expr& f, long j, Alpha alpha,
                       const OptimizerConfig& cfg);

struct NormalizationRoot {
  CPoint xi_star;  // attains the inner max, strictly interior
  double rho = 0.0;  // in (0,1), with |M(rho) - 1| <= bisect_tol
};

/// Solves M(t) := max_{|z|<=1/j} phi(t,z) = 1 by bisection on [0,1],
/// valid since M is continuous with M(0) = 0. Throws PreconditionUnmet
/// when M(1) <= 1 (no extractable non-normality at this j) and
/// NonConvergence when the iteration budget runs out.
NormalizationRoot solve_normalization(const Expr& f, long j, Alpha alpha,
                                      const OptimizerConfig& cfg,
                                      double bisect_tol, int max_iters = 200);

/// The bound (1 + sgn(a)/j)^(2a) * (1/(1 - 1/j))^(1+a) on the sharp
/// derivative of a normalized rescaled function; tends to 1 as j grows.
double sharp_upper_bound(long j, Alpha alpha);

/// Verifies phi(1,z) >= (1-j|z|)^(1+|a|) f^#(z) - tol, the comparison the
/// scalar power inequalities guarantee for every real a > -1.
bool weight_inequality_check(const Expr& f, long j, Alpha alpha,
                             const CPoint& z, double tol = 1e-12);

/// One constructive rescaling output at index j.
struct RescalingStep {
  long j = 0;
  double alpha = 0.0;
  CPoint xi_star;
  double rho = 0.0;  // in (0,1)
  double r = 0.0;    // (1 - j|xi_star|) * rho
  ExprPtr g;         // r^alpha f_j(xi_star + r z)
  double sharp_origin_residual = 0.0;  // |g^#(0) - 1|
  double bound_value = 0.0;            // sharp_upper_bound(j, alpha)
  double max_sharp_on_grid = 0.0;      // over |z| <= min(j/2, report_radius)
};

/// Runs the full construction at one j: instantiate, solve the
/// normalization, build g = r^alpha f_j(xi* + r z), and record the
/// normalization residual and the grid check against the upper bound.
/// The family must already be recentered so the probe point is the origin.
RescalingStep rescale_step(const FamilySpec& family, long j, Alpha alpha,
                           const OptimizerConfig& cfg, double bisect_tol,
                           double report_radius, int report_grid_per_dim);

inline double weighted_functional(const ExprPtr& f, long j, Alpha alpha,
                                  double t, const CPoint& z) {
  return weighted_functional(*f, j, alpha, t, z);
}
inline MaxResult weighted_max(const ExprPtr& f, long j, Alpha alpha,
                              const OptimizerConfig& cfg) {
  return weighted_max(*f, j, alpha, cfg);
}
inline NormalizationRoot solve_normalization(const ExprPtr& f, long j,
                                             Alpha alpha,
                                             const OptimizerConfig& cfg,
                                             double bisect_tol,
                                             int max_iters = 200) {
  return solve_normalization(*f, j, alpha, cfg, bisect_tol, max_iters);
}
inline bool weight_inequality_check(const ExprPtr& f, long j, Alpha alpha,
                                    const CPoint& z, double tol = 1e-12) {
  return weight_inequality_check(*f, j, alpha, z, tol);
}

}  // namespace zrescale
