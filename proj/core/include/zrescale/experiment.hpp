#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zrescale/limits.hpp"
#include "zrescale/marty.hpp"
#include "zrescale/optimize.hpp"
#include "zrescale/rescale.hpp"
#include "zrescale/types.hpp"

namespace zrescale {

struct ReportConfig {
  double ball_radius = 1.0;
  int grid_per_dim = 16;
  std::filesystem::path out_dir = "out";
};

/// One experiment: a family, an exponent, a j schedule, and the optimizer
/// and reporting knobs. Loaded from JSON (schema in the README) and
/// validated before anything runs.
struct ExperimentConfig {
  bool from_catalogue = true;
  std::string family_name;        // catalogue kind
  std::string family_expression;  // expression kind
  int dimension = 1;
  bool zero_free = false;
  Ball domain;  // resolved from the catalogue, or given for expressions
  double alpha = 0.0;
  std::vector<long> j_schedule;
  CPoint probe_center;  // z0; the pipeline recenters it to the origin
  OptimizerConfig optimizer;
  double bisect_tol = 1e-9;
  ReportConfig report;
  long j_max_cap = 200;
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws DomainError when any invariant fails (alpha range, schedule
/// shape, ball containments, cap).
void validate(const ExperimentConfig& config);

/// Resolved family for the config (catalogue lookup or expression parse).
FamilySpec config_family(const ExperimentConfig& config);

/// Canonical JSON echo of a validated config: fixed key order, so two runs
/// of the same config embed byte-identical echoes.
std::string canonical_config_json(const ExperimentConfig& config);

/// Honors the ZRESCALE_OUT_DIR environment override.
void apply_env_overrides(ExperimentConfig& config);

enum class StepStatus { Ok, PreconditionUnmet, NumericError };

struct StepRecord {
  long j = 0;
  StepStatus status = StepStatus::Ok;
  std::optional<RescalingStep> step;  // present when status == Ok
  std::string message;                // failure detail otherwise
};

struct RunResult {
  int exit_code = 0;
  MartyReport marty;              // per_j holds the j's that evaluated cleanly
  std::vector<StepRecord> trace;  // one record per scheduled j, in order
  std::optional<ConvergenceReport> convergence;
  // Informational only, never part of the exit code: whether the observed
  // rho_j sequence is non-increasing, and the Hurwitz dichotomy flag on the
  // limit candidate of a zero-free family.
  std::optional<bool> rho_non_increasing;
  std::optional<ZeroFreeFlag> dichotomy;
  std::vector<std::string> errors;  // per-j failures outside the trace schema
  std::filesystem::path out_dir;
};

/// Runs the Marty probe, the per-j rescaling construction, and the
/// convergence diagnostics, then writes report.json, rescaling_trace.csv
/// and convergence.csv into out_dir.
///
/// Exit codes: 0 success with grid-converging steps; 2 when every j hits
/// the unmet normalization precondition (the family probes normal at z0);
/// 3 when steps exist but convergence is inconclusive (or fewer than two
/// steps survived). Config errors throw before any artifact is written;
/// the CLI maps them to exit 1.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace zrescale
