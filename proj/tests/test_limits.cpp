#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "zrescale/catalogue.hpp"
#include "zrescale/errors.hpp"
#include "zrescale/limits.hpp"

using namespace zrescale;
using testsupport::rel_error;
using testsupport::Rng;

namespace {

const OptimizerConfig kCfg{16, 4, 200, 1e-9, 42};

FamilySpec family_of(const char* name) {
  return make_family(catalogue_entry(name));
}

}  // namespace

TEST_CASE("convergence diagnostic on the linear family") {
  FamilySpec family = family_of("linear");
  std::vector<RescalingStep> steps;
  for (long j : {10L, 100L})
    steps.push_back(rescale_step(family, j, Alpha{0.0}, kCfg, 1e-10, 1.0, 16));

  const ConvergenceReport report = convergence_diagnostic(steps, 1.0, 16);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.pairs[0].j_low == 10);
  CHECK(report.pairs[0].j_high == 100);
  CHECK(report.pairs[0].sup_diff <= 1e-8);
  CHECK(report.cauchy_verdict == CauchyVerdict::Converging);
  CHECK(std::abs(report.limit_sharp_origin - 1.0) <= 1e-9);
  // g ~ z1: sharp = 1/(1+s^2) <= 1, equal to 1 at the origin
  CHECK(report.limit_sharp_max <= 1.0 + 1e-9);
  CHECK(report.limit_sharp_max >= 1.0 - 1e-9);
  CHECK(report.min_abs_limit <= 1e-8);  // grid contains the origin

  CHECK_THROWS_AS(convergence_diagnostic({steps[0]}, 1.0, 16), DomainError);
  CHECK_THROWS_AS(convergence_diagnostic(steps, 6.0, 16), DomainError);
}

TEST_CASE("limit sharp check certifies maxima at the origin") {
  CHECK(limit_sharp_check(*parse_expression("z1", 1), 1.0, 16) == 0.0);
  CHECK(limit_sharp_check(*parse_expression("5", 1), 1.0, 16) == 0.0);
  // sharp of exp depends only on Re z and peaks at 0, so the residual is 0
  CHECK(limit_sharp_check(*parse_expression("exp(z1)", 1), 1.0, 16) == 0.0);
  // a shifted zero pulls the maximum away from the origin
  CHECK(limit_sharp_check(*parse_expression("z1 + 1", 1), 1.0, 16) > 0.3);
}

TEST_CASE("backward probe on the affine_normal family") {
  FamilySpec family = family_of("affine_normal");
  const std::vector<long> schedule{10, 20, 40, 80, 100};
  std::vector<CPoint> z_seq(schedule.size(), origin(1));
  std::vector<double> rho_seq;
  for (long j : schedule) rho_seq.push_back(1.0 / static_cast<double>(j));

  const BackwardProbe probe = normal_backward_probe(
      family, schedule, z_seq, rho_seq, Ball{origin(1), 0.5}, kCfg);
  REQUIRE(probe.samples.size() == schedule.size());
  CHECK(probe.marty_bound <= 1.0 + 1e-9);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const BackwardSample& s = probe.samples[k];
    CHECK(s.origin_sharp <= probe.marty_bound * rho_seq[k] + 1e-9);
    if (k > 0) CHECK(s.origin_sharp < probe.samples[k - 1].origin_sharp);
  }
  CHECK(probe.samples.back().origin_sharp < 1e-2);
}

TEST_CASE("backward probe on a constant family is identically zero") {
  FamilySpec constant{1, parse_expression("j", 1), Ball{origin(1), 1.0}, false};
  const BackwardProbe probe = normal_backward_probe(
      constant, {5, 10}, {origin(1), origin(1)}, {0.2, 0.1},
      Ball{origin(1), 0.5}, kCfg);
  CHECK(probe.marty_bound == 0.0);
  for (const BackwardSample& s : probe.samples) CHECK(s.origin_sharp == 0.0);
}

TEST_CASE("backward probe refuses diverging families") {
  FamilySpec family = family_of("linear");
  CHECK_THROWS_AS(
      normal_backward_probe(family, {5, 10, 20}, {origin(1), origin(1), origin(1)},
                            {0.2, 0.1, 0.05}, Ball{origin(1), 0.5}, kCfg),
      PreconditionUnmet);
}

TEST_CASE("epsilon probe: lower-bounded sharp implies a bounded verdict") {
  FamilySpec shifted{1, parse_expression("z1 + 3", 1),
                     Ball{CPoint{Complex(0.0, 0.0)}, 1.0}, false};
  const EpsilonProbeResult held = epsilon_family_probe(
      shifted, 0.05, Ball{origin(1), 0.5}, {5, 10, 20}, kCfg);
  CHECK(held.hypothesis_held);
  CHECK(held.marty_verdict == MartyVerdict::Bounded);
  CHECK(rel_error(held.bound_estimate, 1.0 / 7.25) < 1e-6);

  // sharp of j z at |z| = 0.5 is j/(1+j^2/4) -> 0, so the bound fails late
  const EpsilonProbeResult failed = epsilon_family_probe(
      family_of("linear"), 0.05, Ball{origin(1), 0.5}, {5, 10, 20, 50, 100},
      kCfg);
  CHECK(!failed.hypothesis_held);

  FamilySpec constant{1, parse_expression("j", 1), Ball{origin(1), 1.0}, false};
  const EpsilonProbeResult flat = epsilon_family_probe(
      constant, 0.01, Ball{origin(1), 0.5}, {5, 10}, kCfg);
  CHECK(!flat.hypothesis_held);
  CHECK(flat.marty_verdict == MartyVerdict::Bounded);
}

TEST_CASE("reciprocal sharp residual stays at rounding level") {
  FamilySpec family = family_of("exp");
  Rng rng(0x5eed3001);
  std::vector<CPoint> points;
  for (int i = 0; i < 100; ++i) points.push_back(rng.point_in_box(1, 0.3));
  CHECK(reciprocal_sharp_check(family, {5L}, points) <= 1e-12);
  CHECK(reciprocal_sharp_check(family, {2L, 9L}, points) <= 1e-12);

  FamilySpec constant{1, parse_expression("2", 1), Ball{origin(1), 1.0}, true};
  CHECK(reciprocal_sharp_check(constant, {3L}, points) == 0.0);

  FamilySpec not_zero_free = family_of("linear");
  CHECK_THROWS_AS(reciprocal_sharp_check(not_zero_free, {5L}, points),
                  DomainError);
}

TEST_CASE("zero-free limit dichotomy flags") {
  ConvergenceReport r;
  r.min_abs_limit = 1.0;
  r.max_abs_limit = 3.0;
  CHECK(zero_free_limit_check(r, true) == ZeroFreeFlag::Ok);  // nowhere zero

  r.min_abs_limit = 0.0;
  r.max_abs_limit = 5e-10;
  CHECK(zero_free_limit_check(r, true) == ZeroFreeFlag::Ok);  // zero branch

  r.min_abs_limit = 0.0;
  r.max_abs_limit = 1.0;
  CHECK(zero_free_limit_check(r, true) == ZeroFreeFlag::Suspect);

  CHECK_THROWS_AS(zero_free_limit_check(r, false), DomainError);
}

TEST_CASE("dichotomy on real limit candidates") {
  // g = z1 + 2 never vanishes on the unit ball; g = z1 has an interior zero.
  FamilySpec family = family_of("linear");
  std::vector<RescalingStep> steps;
  for (long j : {10L, 100L})
    steps.push_back(rescale_step(family, j, Alpha{0.0}, kCfg, 1e-10, 1.0, 16));
  ConvergenceReport report = convergence_diagnostic(steps, 1.0, 16);
  CHECK(zero_free_limit_check(report, true) == ZeroFreeFlag::Suspect);

  for (auto& s : steps)
    s.g = make_sum({s.g, make_constant(Complex(2.0, 0.0), 1)});
  report = convergence_diagnostic(steps, 1.0, 16);
  CHECK(zero_free_limit_check(report, true) == ZeroFreeFlag::Ok);
}
