#include "zrescale/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "zrescale/errors.hpp"
#include "zrescale/sampling.hpp"
#include "zrescale/sharp.hpp"

namespace zrescale {

namespace {

double clamp_weight(long j, const CPoint& z) {
  // 1 - j|z|, clamped against roundoff just outside the closed ball.
  return std::max(0.0, 1.0 - static_cast<double>(j) * point_norm(z));
}

void require_in_lemma_ball(long j, const CPoint& z) {
  if (point_norm(z) > 1.0 / static_cast<double>(j) + 1e-12)
    throw DomainError("point outside the ball |z| <= 1/j");
}

}  // namespace

Alpha make_alpha(double value, bool zero_free) {
  if (!std::isfinite(value)) throw DomainError("alpha must be finite");
  if (value <= -1.0 && !zero_free)
    throw DomainError("alpha <= -1 requires a zero-free family");
  return Alpha{value};
}

double weighted_functional(const Expr& f, long j, Alpha alpha, double t,
                           const CPoint& z) {
  if (j < 1) throw DomainError("j must be >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t must lie in [0,1]");
  require_in_lemma_ball(j, z);

  const SharpValue sv = sharp(f, z);
  const double st = clamp_weight(j, z) * t;
  const double G = sv.gradient_norm;  // equals (1+|f|^2) f^#
  const double F = sv.abs_f * sv.abs_f;
  const double a = alpha.value;

  if (st == 0.0) return 0.0;  // t = 0 or the boundary |z| = 1/j

  const double num = std::pow(st, 1.0 + a) * G;
  const double den = F == 0.0 ? 1.0 : 1.0 + std::pow(st, 2.0 * a) * F;
  if (std::isfinite(num) && std::isfinite(den)) {
    const double v = num / den;
    if (std::isfinite(v)) return v;
  }
  // Very negative alpha at small st: multiply through by st^(-2a).
  const double v = std::pow(st, 1.0 - a) * G / (std::pow(st, -2.0 * a) + F);
  if (!std::isfinite(v))
    throw NumericRangeError("weighted functional left the double range");
  return v;
}

MaxResult weighted_max(const Expr& f, long j, Alpha alpha,
                       const OptimizerConfig& cfg) {
  if (j < 1) throw DomainError("j must be >= 1");
  const double w = 1.0 + std::abs(alpha.value);
  const Ball ball{origin(f.dimension()), 1.0 / static_cast<double>(j)};
  return maximize_on_ball(
      [&](const CPoint& z) {
        return std::pow(clamp_weight(j, z), w) * sharp(f, z).value;
      },
      ball, cfg);
}

NormalizationRoot solve_normalization(const Expr& f, long j, Alpha alpha,
                                      const OptimizerConfig& cfg,
                                      double bisect_tol, int max_iters) {
  cfg.validate();
  if (j < 1) throw DomainError("j must be >= 1");
  if (!(bisect_tol > 0.0)) throw DomainError("bisect_tol must be > 0");

  const Ball ball{origin(f.dimension()), 1.0 / static_cast<double>(j)};
  BallProbeSet probes(ball, cfg.grid_per_dim);
  auto inner_max = [&](double t) {
    return maximize_over(
        probes,
        [&](const CPoint& z) { return weighted_functional(f, j, alpha, t, z); },
        cfg);
  };

  const MaxResult at_one = inner_max(1.0);
  if (!(at_one.value > 1.0)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "max phi(1,.) = %.6g <= 1 at j = %ld: no extractable "
                  "non-normality",
                  at_one.value, j);
    throw PreconditionUnmet(buf);
  }
  // M(0) = 0 < 1 < M(1): bisect on [0,1] keeping the sign bracket. The
  // returned rho stays strictly inside (0,1) because only midpoints are
  // ever returned.
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const MaxResult m = inner_max(mid);
    if (std::abs(m.value - 1.0) <= bisect_tol)
      return NormalizationRoot{m.argmax, mid};
    if (m.value > 1.0)
      hi = mid;
    else
      lo = mid;
  }
  throw NonConvergence("normalization bisection exhausted its iterations");
}

double sharp_upper_bound(long j, Alpha alpha) {
  if (j < 2) throw DomainError("sharp_upper_bound requires j >= 2");
  const double a = alpha.value;
  const double sgn = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
  const double jd = static_cast<double>(j);
  return std::pow(1.0 + sgn / jd, 2.0 * a) *
         std::pow(1.0 / (1.0 - 1.0 / jd), 1.0 + a);
}

bool weight_inequality_check(const Expr& f, long j, Alpha alpha,
                             const CPoint& z, double tol) {
  require_in_lemma_ball(j, z);
  const double phi1 = weighted_functional(f, j, alpha, 1.0, z);
  const double rhs = std::pow(clamp_weight(j, z), 1.0 + std::abs(alpha.value)) *
                     sharp(f, z).value;
  return phi1 >= rhs - tol;
}

RescalingStep rescale_step(const FamilySpec& family, long j, Alpha alpha,
                           const OptimizerConfig& cfg, double bisect_tol,
                           double report_radius, int report_grid_per_dim) {
  if (j < 2) throw DomainError("rescale_step requires j >= 2");
  if (!(report_radius > 0.0)) throw DomainError("report radius must be > 0");

  ExprPtr f = instantiate(family, j);
  NormalizationRoot root = solve_normalization(*f, j, alpha, cfg, bisect_tol);

  RescalingStep step;
  step.j = j;
  step.alpha = alpha.value;
  step.xi_star = std::move(root.xi_star);
  step.rho = root.rho;
  step.r = (1.0 - static_cast<double>(j) * point_norm(step.xi_star)) * step.rho;
  step.g = scale_by_power(affine_reparam(f, step.xi_star, step.r), step.r,
                          alpha.value);
  step.sharp_origin_residual =
      std::abs(sharp(*step.g, origin(family.dimension)).value - 1.0);
  step.bound_value = sharp_upper_bound(j, alpha);

  const double grid_radius =
      std::min(static_cast<double>(j) / 2.0, report_radius);
  double max_sharp = 0.0;
  for (const CPoint& p :
       ball_grid(Ball{origin(family.dimension), grid_radius},
                 static_cast<std::size_t>(report_grid_per_dim)))
    max_sharp = std::max(max_sharp, sharp(*step.g, p).value);
  step.max_sharp_on_grid = max_sharp;
  return step;
}

}  // namespace zrescale
