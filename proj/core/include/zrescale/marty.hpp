#pragma once

#include <vector>

#include "zrescale/expr.hpp"
#include "zrescale/optimize.hpp"
#include "zrescale/types.hpp"

namespace zrescale {

/// Checks |K.center - domain.center| + K.radius <= domain.radius + 1e-12,
/// i.e. the compact probe ball sits inside the family domain.
void require_inside_domain(const Ball& compact, const Ball& domain);

enum class MartyVerdict { Bounded, Diverging };

struct MartySample {
  long j = 0;
  double sup_estimate = 0.0;
  CPoint argmax;
};

/// Per-j estimates of sup_K f_j^# with a growth classification. The
/// verdict is numerical evidence about the family on K, never a proof of
/// normality or its failure.
struct MartyReport {
  std::vector<MartySample> per_j;  // sorted by j
  MartyVerdict verdict = MartyVerdict::Bounded;
  double bound_estimate = 0.0;   // max sup_estimate (Marty constant estimate)
  double growth_exponent = 0.0;  // log-log LS slope when diverging, else 0
  OptimizerConfig config;
};

/// Best found value of f^# over the ball: Halton grid of grid_per_dim^(2n)
/// probes plus multistart compass refinement. Deterministic; never below
/// the value at the ball center.
MaxResult sup_sharp_on_ball(const Expr& f, const Ball& compact,
                            const OptimizerConfig& cfg);

/// Runs sup_sharp_on_ball for every j in the (strictly increasing)
/// schedule. Diverging verdict: least-squares slope of log(sup) against
/// log(j) exceeds 0.5 and the last sup is at least 4x the first (all sups
/// positive). Otherwise bounded with the max estimate.
MartyReport marty_probe(const FamilySpec& family, const Ball& compact,
                        const std::vector<long>& j_schedule,
                        const OptimizerConfig& cfg);

/// Fills verdict, bound_estimate, and growth_exponent from per_j.
void classify_growth(MartyReport& report);

inline MaxResult sup_sharp_on_ball(const ExprPtr& f, const Ball& compact,
                                   const OptimizerConfig& cfg) {
  return sup_sharp_on_ball(*f, compact, cfg);
}

}  // namespace zrescale
