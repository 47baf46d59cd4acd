#include "zrescale/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrescale/errors.hpp"
#include "zrescale/sampling.hpp"
#include "zrescale/sharp.hpp"

namespace zrescale {

ConvergenceReport convergence_diagnostic(const std::vector<RescalingStep>& steps,
                                         double radius, int grid_per_dim,
                                         double zero_floor) {
  if (steps.size() < 2)
    throw DomainError("convergence diagnostic needs at least 2 steps");
  const int dim = steps.front().g->dimension();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k].g->dimension() != dim)
      throw DomainError("steps disagree on dimension");
    if (steps[k].alpha != steps.front().alpha)
      throw DomainError("steps disagree on alpha");
    if (k > 0 && steps[k].j <= steps[k - 1].j)
      throw DomainError("steps must be sorted by strictly increasing j");
  }
  if (!(radius > 0.0) ||
      radius > static_cast<double>(steps.front().j) / 2.0 + 1e-12)
    throw DomainError("radius must lie in (0, min(j)/2]");

  const std::vector<CPoint> grid =
      ball_grid(Ball{origin(dim), radius}, static_cast<std::size_t>(grid_per_dim));

  std::vector<std::vector<Complex>> values(steps.size());
  for (std::size_t s = 0; s < steps.size(); ++s) {
    values[s].reserve(grid.size());
    for (const CPoint& p : grid) values[s].push_back(evaluate(*steps[s].g, p));
  }

  ConvergenceReport report;
  report.radius = radius;
  for (std::size_t s = 0; s + 1 < steps.size(); ++s) {
    double d = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      d = std::max(d, std::abs(values[s][i] - values[s + 1][i]));
    report.pairs.push_back(PairDiff{steps[s].j, steps[s + 1].j, d});
  }

  bool all_tiny = true;
  bool monotone = true;
  for (std::size_t k = 0; k < report.pairs.size(); ++k) {
    all_tiny = all_tiny && report.pairs[k].sup_diff <= zero_floor;
    if (k > 0) {
      const double prev = std::max(report.pairs[k - 1].sup_diff, zero_floor);
      monotone = monotone && report.pairs[k].sup_diff <= 1.1 * prev;
    }
  }
  const double first = report.pairs.front().sup_diff;
  const double last = report.pairs.back().sup_diff;
  const bool shrunk = last <= zero_floor || last < 0.1 * first;
  report.cauchy_verdict = (all_tiny || (monotone && shrunk))
                              ? CauchyVerdict::Converging
                              : CauchyVerdict::Inconclusive;

  const ExprPtr& last_g = steps.back().g;
  double sharp_max = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    sharp_max = std::max(sharp_max, sharp(*last_g, grid[i]).value);
    const double a = std::abs(values.back()[i]);
    min_abs = std::min(min_abs, a);
    max_abs = std::max(max_abs, a);
  }
  report.limit_sharp_max = sharp_max;
  report.limit_sharp_origin = sharp(*last_g, origin(dim)).value;
  report.min_abs_limit = min_abs;
  report.max_abs_limit = max_abs;
  return report;
}

double limit_sharp_check(const Expr& g, double radius, int grid_per_dim) {
  if (!(radius > 0.0)) throw DomainError("radius must be > 0");
  double max_sharp = 0.0;
  for (const CPoint& p : ball_grid(Ball{origin(g.dimension()), radius},
                                   static_cast<std::size_t>(grid_per_dim)))
    max_sharp = std::max(max_sharp, sharp(g, p).value);
  return std::max(0.0, max_sharp - sharp(g, origin(g.dimension())).value);
}

BackwardProbe normal_backward_probe(const FamilySpec& family,
                                    const std::vector<long>& j_schedule,
                                    const std::vector<CPoint>& z_seq,
                                    const std::vector<double>& rho_seq,
                                    const Ball& compact,
                                    const OptimizerConfig& cfg) {
  if (z_seq.size() != j_schedule.size() || rho_seq.size() != j_schedule.size())
    throw DomainError("z_seq and rho_seq must match the schedule length");
  for (double rho : rho_seq)
    if (!(rho > 0.0)) throw DomainError("rho sequence must be positive");

  MartyReport marty = marty_probe(family, compact, j_schedule, cfg);
  if (marty.verdict == MartyVerdict::Diverging)
    throw PreconditionUnmet(
        "backward probe requires a Marty-bounded family on K");

  BackwardProbe probe;
  probe.marty_bound = marty.bound_estimate;
  for (std::size_t k = 0; k < j_schedule.size(); ++k) {
    ExprPtr f = instantiate(family, j_schedule[k]);
    ExprPtr g = affine_reparam(f, z_seq[k], rho_seq[k]);
    probe.samples.push_back(BackwardSample{
        j_schedule[k], sharp(*g, origin(family.dimension)).value});
  }
  return probe;
}

EpsilonProbeResult epsilon_family_probe(const FamilySpec& family,
                                        double epsilon, const Ball& compact,
                                        const std::vector<long>& j_schedule,
                                        const OptimizerConfig& cfg,
                                        std::size_t hypothesis_samples) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  require_inside_domain(compact, family.domain);

  const std::vector<CPoint> samples = ball_samples(compact, hypothesis_samples);
  bool held = true;
  for (long j : j_schedule) {
    ExprPtr f = instantiate(family, j);
    double min_sharp = std::numeric_limits<double>::infinity();
    for (const CPoint& p : samples) {
      min_sharp = std::min(min_sharp, sharp(*f, p).value);
      if (min_sharp <= epsilon) break;
    }
    if (min_sharp <= epsilon) {
      held = false;
      break;
    }
  }

  MartyReport marty = marty_probe(family, compact, j_schedule, cfg);
  return EpsilonProbeResult{held, marty.verdict, marty.bound_estimate};
}

double reciprocal_sharp_check(const FamilySpec& family,
                              const std::vector<long>& j_schedule,
                              const std::vector<CPoint>& points) {
  if (!family.zero_free)
    throw DomainError("reciprocal sharp check requires a zero-free family");
  double max_residual = 0.0;
  for (long j : j_schedule) {
    ExprPtr f = instantiate(family, j);
    ExprPtr inv_f = reciprocal(family, f);
    for (const CPoint& p : points) {
      max_residual = std::max(
          max_residual, std::abs(sharp(*inv_f, p).value - sharp(*f, p).value));
    }
  }
  return max_residual;
}

ZeroFreeFlag zero_free_limit_check(const ConvergenceReport& report,
                                   bool family_zero_free) {
  if (!family_zero_free)
    throw DomainError("dichotomy check applies to zero-free families only");
  if (report.min_abs_limit > 1e-9) return ZeroFreeFlag::Ok;  // nowhere zero
  if (report.max_abs_limit < 1e-9) return ZeroFreeFlag::Ok;  // identically zero
  return ZeroFreeFlag::Suspect;
}

}  // namespace zrescale
