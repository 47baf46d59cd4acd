#pragma once

#include <functional>
#include <vector>

#include "zrescale/types.hpp"

namespace zrescale {

/// Knobs for the grid + multistart direct-search maximizer. The whole
/// procedure is deterministic: the grid is a fixed Halton set, multistart
/// seeds are the best grid points in order, and ties resolve to the
/// earliest probe.
struct OptimizerConfig {
  int grid_per_dim = 16;    // >= 8; grid size is grid_per_dim^(2n) before filtering
  int multistarts = 4;      // >= 1
  int refine_iters = 200;   // compass-search sweeps per start
  double value_tol = 1e-9;  // > 0; reporting slack, not a stopping rule
  long long seed = 0;       // echoed into reports

  void validate() const;
};

struct MaxResult {
  double value = 0.0;
  CPoint argmax;
};

using Objective = std::function<double(const CPoint&)>;

/// Reusable probe grid over one ball (center always included). Building it
/// once and maximizing many objectives over it keeps bisection loops cheap.
class BallProbeSet {
 public:
  BallProbeSet(Ball ball, int grid_per_dim);

  const Ball& ball() const { return ball_; }
  const std::vector<CPoint>& points() const { return points_; }

 private:
  Ball ball_;
  std::vector<CPoint> points_;
};

/// Best value of the objective over the probe grid followed by
/// `multistarts` compass-search refinements, all projected into the ball.
/// The result never falls below the best grid value.
MaxResult maximize_over(const BallProbeSet& probes, const Objective& objective,
                        const OptimizerConfig& cfg);

MaxResult maximize_on_ball(const Objective& objective, const Ball& ball,
                           const OptimizerConfig& cfg);

}  // namespace zrescale
