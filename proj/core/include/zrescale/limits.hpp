#pragma once

#include <vector>

#include "zrescale/expr.hpp"
#include "zrescale/marty.hpp"
#include "zrescale/rescale.hpp"
#include "zrescale/types.hpp"

namespace zrescale {

enum class CauchyVerdict { Converging, Inconclusive };

struct PairDiff {
  long j_low = 0;
  long j_high = 0;
  double sup_diff = 0.0;  // max_grid |g_low - g_high|
};

/// Grid-level Cauchy diagnostics for a rescaled sequence. The verdict
/// speaks only about the sampled grid; it never claims convergence of the
/// true sequence. Limit quantities come from the largest-j step.
struct ConvergenceReport {
  double radius = 0.0;
  std::vector<PairDiff> pairs;  // consecutive steps, ordered by j_low
  CauchyVerdict cauchy_verdict = CauchyVerdict::Inconclusive;
  double limit_sharp_max = 0.0;     // max_grid g_last^#
  double limit_sharp_origin = 0.0;  // g_last^#(0)
  double min_abs_limit = 0.0;       // min_grid |g_last|
  double max_abs_limit = 0.0;       // max_grid |g_last|
};

/// Needs >= 2 steps of equal dimension and alpha, sorted by j, and
/// radius <= min(j)/2. Converging: all sup_diffs at or below zero_floor,
/// or non-increasing within factor 1.1 with the last below 0.1x the first.
ConvergenceReport convergence_diagnostic(const std::vector<RescalingStep>& steps,
                                         double radius, int grid_per_dim,
                                         double zero_floor = 1e-8);

/// max(0, max_grid g^# - g^#(0)): zero certifies the grid-level inequality
/// g^#(z) <= g^#(0).
double limit_sharp_check(const Expr& g, double radius, int grid_per_dim);

struct BackwardSample {
  long j = 0;
  double origin_sharp = 0.0;  // (f_j(z_j + rho_j z))^# at z = 0
};

struct BackwardProbe {
  double marty_bound = 0.0;  // M estimate on K
  std::vector<BackwardSample> samples;
};

/// The normality (backward) direction: for a Marty-bounded family the
/// rescaled origin sharps obey origin_sharp <= M * rho_j, hence tend to 0.
/// Throws PreconditionUnmet when the Marty probe reports divergence.
BackwardProbe normal_backward_probe(const FamilySpec& family,
                                    const std::vector<long>& j_schedule,
                                    const std::vector<CPoint>& z_seq,
                                    const std::vector<double>& rho_seq,
                                    const Ball& compact,
                                    const OptimizerConfig& cfg);

struct EpsilonProbeResult {
  bool hypothesis_held = false;  // min sampled f_j^# > epsilon for every j
  MartyVerdict marty_verdict = MartyVerdict::Bounded;
  double bound_estimate = 0.0;
};

/// Probes the lower-bound normality statement: when every member keeps
/// f^# above epsilon on K, the family should probe Marty-bounded there.
EpsilonProbeResult epsilon_family_probe(const FamilySpec& family,
                                        double epsilon, const Ball& compact,
                                        const std::vector<long>& j_schedule,
                                        const OptimizerConfig& cfg,
                                        std::size_t hypothesis_samples = 10000);

/// Max over j and points of |(1/f_j)^# - f_j^#|; the pluriharmonic
/// identity makes this zero in exact arithmetic for zero-free families.
double reciprocal_sharp_check(const FamilySpec& family,
                              const std::vector<long>& j_schedule,
                              const std::vector<CPoint>& points);

enum class ZeroFreeFlag { Ok, Suspect };

/// Dichotomy check on the limit candidate of a zero-free family: either
/// nowhere zero on the grid or identically zero; anything else is flagged
/// as needing a finer schedule.
ZeroFreeFlag zero_free_limit_check(const ConvergenceReport& report,
                                   bool family_zero_free);

}  // namespace zrescale
