#include "zrescale/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "zrescale/errors.hpp"
#include "zrescale/sampling.hpp"

namespace zrescale {

namespace {

std::string point_text(const CPoint& p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.9g%+.9gi", k ? ", " : "", p[k].real(),
                  p[k].imag());
    s += buf;
  }
  return s + ")";
}

double eval_or_report(const Objective& objective, const CPoint& p) {
  try {
    return objective(p);
  } catch (const NumericRangeError& e) {
    throw NumericRangeError(std::string(e.what()) + " at probe point " +
                            point_text(p));
  }
}

void project_into(const Ball& ball, CPoint& p) {
  const double d = point_distance(p, ball.center);
  if (d <= ball.radius || d == 0.0) return;
  const double f = ball.radius / d;
  for (std::size_t k = 0; k < p.size(); ++k)
    p[k] = ball.center[k] + f * (p[k] - ball.center[k]);
}

MaxResult compass_refine(const Objective& objective, const Ball& ball,
                         const CPoint& start, double start_value,
                         int max_sweeps) {
  CPoint x = start;
  double fx = start_value;
  double step = ball.radius / 8.0;
  const double min_step = ball.radius * 1e-13;
  const std::size_t n = x.size();
  for (int sweep = 0; sweep < max_sweeps && step >= min_step; ++sweep) {
    bool improved = false;
    for (std::size_t d = 0; d < 2 * n && !improved; ++d) {
      for (double sgn : {1.0, -1.0}) {
        CPoint y = x;
        if (d % 2 == 0)
          y[d / 2] += Complex(sgn * step, 0.0);
        else
          y[d / 2] += Complex(0.0, sgn * step);
        project_into(ball, y);
        const double fy = eval_or_report(objective, y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return MaxResult{fx, std::move(x)};
}

}  // namespace

void OptimizerConfig::validate() const {
  if (grid_per_dim < 8) throw DomainError("optimizer grid_per_dim must be >= 8");
  if (multistarts < 1) throw DomainError("optimizer multistarts must be >= 1");
  if (refine_iters < 0) throw DomainError("optimizer refine_iters must be >= 0");
  if (!(value_tol > 0.0)) throw DomainError("optimizer value_tol must be > 0");
}

BallProbeSet::BallProbeSet(Ball ball, int grid_per_dim) : ball_(std::move(ball)) {
  if (!(ball_.radius > 0.0)) throw DomainError("ball radius must be > 0");
  if (ball_.dimension() < 1) throw DomainError("ball dimension must be >= 1");
  points_ = ball_grid(ball_, static_cast<std::size_t>(grid_per_dim));
}

MaxResult maximize_over(const BallProbeSet& probes, const Objective& objective,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  const std::vector<CPoint>& pts = probes.points();

  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    values[i] = eval_or_report(objective, pts[i]);

  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t starts =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.multistarts), order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;  // first-found wins ties
                    });

  MaxResult best{values[order[0]], pts[order[0]]};
  for (std::size_t s = 0; s < starts; ++s) {
    MaxResult local = compass_refine(objective, probes.ball(), pts[order[s]],
                                     values[order[s]], cfg.refine_iters);
    if (local.value > best.value) best = std::move(local);
  }
  return best;
}

MaxResult maximize_on_ball(const Objective& objective, const Ball& ball,
                           const OptimizerConfig& cfg) {
  return maximize_over(BallProbeSet(ball, cfg.grid_per_dim), objective, cfg);
}

}  // namespace zrescale
