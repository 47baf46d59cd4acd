#include "zrescale/marty.hpp"

#include <algorithm>
#include <cmath>

#include "zrescale/errors.hpp"
#include "zrescale/sharp.hpp"

namespace zrescale {

namespace {

// Criterion for calling a sup sequence divergent: clear power-law slope and
// a solid growth multiple across the schedule.
constexpr double kDivergenceSlope = 0.5;
constexpr double kDivergenceGrowth = 4.0;

double loglog_slope(const std::vector<MartySample>& samples) {
  // Least squares of log(sup) against log(j).
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const MartySample& s : samples) {
    const double x = std::log(static_cast<double>(s.j));
    const double y = std::log(s.sup_estimate);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace

void require_inside_domain(const Ball& compact, const Ball& domain) {
  if (compact.dimension() != domain.dimension())
    throw DomainError("compact ball and domain dimension mismatch");
  if (!(compact.radius > 0.0)) throw DomainError("compact ball radius must be > 0");
  const double d = point_distance(compact.center, domain.center);
  if (d + compact.radius > domain.radius + 1e-12)
    throw DomainError("compact ball is not contained in the family domain");
}

MaxResult sup_sharp_on_ball(const Expr& f, const Ball& compact,
                            const OptimizerConfig& cfg) {
  return maximize_on_ball(
      [&f](const CPoint& z) { return sharp(f, z).value; }, compact, cfg);
}

MartyReport marty_probe(const FamilySpec& family, const Ball& compact,
                        const std::vector<long>& j_schedule,
                        const OptimizerConfig& cfg) {
  cfg.validate();
  require_inside_domain(compact, family.domain);
  if (j_schedule.empty()) throw DomainError("j schedule must be nonempty");
  for (std::size_t k = 0; k + 1 < j_schedule.size(); ++k)
    if (j_schedule[k] >= j_schedule[k + 1])
      throw DomainError("j schedule must be strictly increasing");

  MartyReport report;
  report.config = cfg;
  BallProbeSet probes(compact, cfg.grid_per_dim);
  for (long j : j_schedule) {
    ExprPtr f = instantiate(family, j);
    MaxResult m = maximize_over(
        probes, [&f](const CPoint& z) { return sharp(*f, z).value; }, cfg);
    report.per_j.push_back(MartySample{j, m.value, std::move(m.argmax)});
  }

  classify_growth(report);
  return report;
}

void classify_growth(MartyReport& report) {
  report.verdict = MartyVerdict::Bounded;
  report.growth_exponent = 0.0;
  double max_sup = 0.0;
  bool all_positive = !report.per_j.empty();
  for (const MartySample& s : report.per_j) {
    max_sup = std::max(max_sup, s.sup_estimate);
    all_positive = all_positive && s.sup_estimate > 0.0;
  }
  report.bound_estimate = max_sup;

  if (all_positive && report.per_j.size() >= 2) {
    const double slope = loglog_slope(report.per_j);
    const double growth =
        report.per_j.back().sup_estimate / report.per_j.front().sup_estimate;
    if (slope > kDivergenceSlope && growth >= kDivergenceGrowth) {
      report.verdict = MartyVerdict::Diverging;
      report.growth_exponent = slope;
    }
  }
}

}  // namespace zrescale
