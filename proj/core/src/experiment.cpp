#include "zrescale/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zrescale/catalogue.hpp"
#include "zrescale/errors.hpp"
#include "zrescale/sharp.hpp"
#include "zrescale/version.hpp"

namespace zrescale {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CPoint parse_point(const ordered_json& node, const char* what) {
  if (!node.is_array() || node.empty())
    throw DomainError(std::string("config: ") + what +
                      " must be a nonempty array of [re, im] pairs");
  CPoint p;
  for (const auto& coord : node) {
    if (!coord.is_array() || coord.size() != 2)
      throw DomainError(std::string("config: ") + what +
                        " coordinates must be [re, im] pairs");
    const double re = coord[0].get<double>();
    const double im = coord[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw DomainError(std::string("config: ") + what +
                        " coordinates must be finite");
    p.emplace_back(re, im);
  }
  return p;
}

ordered_json point_json(const CPoint& p) {
  ordered_json a = ordered_json::array();
  for (const Complex& c : p) a.push_back({c.real(), c.imag()});
  return a;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json family;
  family["kind"] = c.from_catalogue ? "catalogue" : "expression";
  if (c.from_catalogue)
    family["name"] = c.family_name;
  else
    family["template"] = c.family_expression;

  ordered_json out;
  out["family"] = family;
  out["dimension"] = c.dimension;
  out["zero_free"] = c.zero_free;
  out["domain"] = {{"center", point_json(c.domain.center)},
                   {"radius", c.domain.radius}};
  out["alpha"] = c.alpha;
  out["j_schedule"] = c.j_schedule;
  out["probe_center"] = point_json(c.probe_center);
  out["optimizer"] = {{"grid_per_dim", c.optimizer.grid_per_dim},
                      {"multistarts", c.optimizer.multistarts},
                      {"refine_iters", c.optimizer.refine_iters},
                      {"value_tol", c.optimizer.value_tol},
                      {"seed", c.optimizer.seed}};
  out["bisect_tol"] = c.bisect_tol;
  out["report"] = {{"ball_radius", c.report.ball_radius},
                   {"grid_per_dim", c.report.grid_per_dim},
                   {"out_dir", c.report.out_dir.string()}};
  out["j_max_cap"] = c.j_max_cap;
  return out;
}

const char* status_text(StepStatus s) {
  switch (s) {
    case StepStatus::Ok:
      return "ok";
    case StepStatus::PreconditionUnmet:
      return "precondition_unmet";
    case StepStatus::NumericError:
      return "numeric_error";
  }
  return "unknown";
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<StepRecord>& trace, int dimension) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << "j,status";
  for (int k = 1; k <= dimension; ++k) out << ",xi_star_re_" << k;
  for (int k = 1; k <= dimension; ++k) out << ",xi_star_im_" << k;
  out << ",rho,r,sharp_origin_residual,bound_value,max_sharp_on_grid\n";
  for (const StepRecord& rec : trace) {
    out << rec.j << ',' << status_text(rec.status);
    if (rec.step) {
      const RescalingStep& s = *rec.step;
      for (int k = 0; k < dimension; ++k)
        out << ',' << fmt17(s.xi_star[k].real());
      for (int k = 0; k < dimension; ++k)
        out << ',' << fmt17(s.xi_star[k].imag());
      out << ',' << fmt17(s.rho) << ',' << fmt17(s.r) << ','
          << fmt17(s.sharp_origin_residual) << ',' << fmt17(s.bound_value)
          << ',' << fmt17(s.max_sharp_on_grid);
    } else {
      for (int k = 0; k < 2 * dimension + 5; ++k) out << ',';
    }
    out << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::optional<ConvergenceReport>& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << "j_low,j_high,sup_diff,radius\n";
  if (!report) return;
  for (const PairDiff& p : report->pairs)
    out << p.j_low << ',' << p.j_high << ',' << fmt17(p.sup_diff) << ','
        << fmt17(report->radius) << '\n';
}

ordered_json marty_json(const MartyReport& m) {
  ordered_json per_j = ordered_json::array();
  for (const MartySample& s : m.per_j)
    per_j.push_back({{"j", s.j},
                     {"sup_estimate", s.sup_estimate},
                     {"argmax", point_json(s.argmax)}});
  ordered_json out;
  out["per_j"] = per_j;
  out["verdict"] =
      m.verdict == MartyVerdict::Diverging ? "DIVERGING" : "BOUNDED";
  out["bound_estimate"] = m.bound_estimate;
  out["growth_exponent"] = m.growth_exponent;
  return out;
}

ordered_json trace_json(const std::vector<StepRecord>& trace) {
  ordered_json rows = ordered_json::array();
  for (const StepRecord& rec : trace) {
    ordered_json row;
    row["j"] = rec.j;
    row["status"] = status_text(rec.status);
    if (rec.step) {
      const RescalingStep& s = *rec.step;
      row["xi_star"] = point_json(s.xi_star);
      row["rho"] = s.rho;
      row["r"] = s.r;
      row["g"] = to_string(s.g);
      row["sharp_origin_residual"] = s.sharp_origin_residual;
      row["bound_value"] = s.bound_value;
      row["max_sharp_on_grid"] = s.max_sharp_on_grid;
    } else {
      row["message"] = rec.message;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json convergence_json(const ConvergenceReport& r) {
  ordered_json pairs = ordered_json::array();
  for (const PairDiff& p : r.pairs)
    pairs.push_back(
        {{"j_low", p.j_low}, {"j_high", p.j_high}, {"sup_diff", p.sup_diff}});
  ordered_json out;
  out["radius"] = r.radius;
  out["pairs"] = pairs;
  out["cauchy_verdict"] = r.cauchy_verdict == CauchyVerdict::Converging
                              ? "CONVERGING"
                              : "INCONCLUSIVE";
  out["limit_sharp_max"] = r.limit_sharp_max;
  out["limit_sharp_origin"] = r.limit_sharp_origin;
  out["min_abs_limit"] = r.min_abs_limit;
  out["max_abs_limit"] = r.max_abs_limit;
  return out;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw DomainError(std::string("config: malformed JSON: ") + e.what());
  }
  try {
    ExperimentConfig c;
    const auto& family = doc.at("family");
    const std::string kind = family.at("kind").get<std::string>();
    if (kind == "catalogue") {
      c.from_catalogue = true;
      c.family_name = family.at("name").get<std::string>();
      const CatalogueEntry& entry = catalogue_entry(c.family_name);
      c.dimension = entry.dimension;
      c.zero_free = entry.zero_free;
      c.domain = entry.domain;
      if (doc.contains("dimension") &&
          doc["dimension"].get<int>() != entry.dimension)
        throw DomainError("config: dimension disagrees with the catalogue");
      if (doc.contains("zero_free") &&
          doc["zero_free"].get<bool>() != entry.zero_free)
        throw DomainError("config: zero_free disagrees with the catalogue");
    } else if (kind == "expression") {
      c.from_catalogue = false;
      c.family_expression = family.at("template").get<std::string>();
      c.dimension = doc.at("dimension").get<int>();
      c.zero_free = doc.value("zero_free", false);
      c.domain = Ball{origin(std::max(c.dimension, 1)), 1.0};
      if (doc.contains("domain")) {
        const auto& dom = doc["domain"];
        c.domain.center = parse_point(dom.at("center"), "domain.center");
        c.domain.radius = dom.at("radius").get<double>();
      }
    } else {
      throw DomainError("config: family.kind must be catalogue or expression");
    }

    c.alpha = doc.at("alpha").get<double>();
    c.j_schedule = doc.at("j_schedule").get<std::vector<long>>();
    c.probe_center = doc.contains("probe_center")
                         ? parse_point(doc["probe_center"], "probe_center")
                         : origin(std::max(c.dimension, 1));
    if (doc.contains("optimizer")) {
      const auto& opt = doc["optimizer"];
      c.optimizer.grid_per_dim = opt.value("grid_per_dim", c.optimizer.grid_per_dim);
      c.optimizer.multistarts = opt.value("multistarts", c.optimizer.multistarts);
      c.optimizer.refine_iters = opt.value("refine_iters", c.optimizer.refine_iters);
      c.optimizer.value_tol = opt.value("value_tol", c.optimizer.value_tol);
      c.optimizer.seed = opt.value("seed", c.optimizer.seed);
    }
    c.bisect_tol = doc.value("bisect_tol", 1e-9);
    const auto& rep = doc.at("report");
    c.report.ball_radius = rep.at("ball_radius").get<double>();
    c.report.grid_per_dim = rep.at("grid_per_dim").get<int>();
    c.report.out_dir = rep.at("out_dir").get<std::string>();
    c.j_max_cap = doc.value("j_max_cap", 200L);
    return c;
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

void validate(const ExperimentConfig& c) {
  if (c.dimension < 1) throw DomainError("config: dimension must be >= 1");
  if (!(c.domain.radius > 0.0))
    throw DomainError("config: domain radius must be > 0");
  if (static_cast<int>(c.domain.center.size()) != c.dimension)
    throw DomainError("config: domain center dimension mismatch");
  make_alpha(c.alpha, c.zero_free);
  if (c.j_schedule.empty())
    throw DomainError("config: j_schedule must be nonempty");
  for (std::size_t k = 0; k < c.j_schedule.size(); ++k) {
    if (c.j_schedule[k] < 2)
      throw DomainError("config: every j must be >= 2");
    if (c.j_schedule[k] > c.j_max_cap)
      throw DomainError("config: j exceeds j_max_cap");
    if (k > 0 && c.j_schedule[k] <= c.j_schedule[k - 1])
      throw DomainError("config: j_schedule must be strictly increasing");
  }
  if (static_cast<int>(c.probe_center.size()) != c.dimension)
    throw DomainError("config: probe_center dimension mismatch");
  if (!is_finite(c.probe_center))
    throw DomainError("config: probe_center must be finite");
  c.optimizer.validate();
  if (!(c.bisect_tol > 0.0))
    throw DomainError("config: bisect_tol must be > 0");
  if (!(c.report.ball_radius > 0.0))
    throw DomainError("config: report ball_radius must be > 0");
  if (c.report.ball_radius >
      static_cast<double>(c.j_schedule.front()) / 2.0 + 1e-12)
    throw DomainError("config: report ball_radius must be <= min(j)/2");
  if (c.report.grid_per_dim < 1)
    throw DomainError("config: report grid_per_dim must be positive");

  // Both probe balls must sit inside the declared domain.
  require_inside_domain(Ball{c.probe_center, c.report.ball_radius}, c.domain);
  require_inside_domain(
      Ball{c.probe_center, 1.0 / static_cast<double>(c.j_schedule.front())},
      c.domain);
}

FamilySpec config_family(const ExperimentConfig& c) {
  if (c.from_catalogue) return make_family(catalogue_entry(c.family_name));
  FamilySpec family;
  family.dimension = c.dimension;
  family.tmpl = parse_expression(c.family_expression, c.dimension);
  family.domain = c.domain;
  family.zero_free = c.zero_free;
  return family;
}

std::string canonical_config_json(const ExperimentConfig& c) {
  return config_json(c).dump(2);
}

void apply_env_overrides(ExperimentConfig& c) {
  if (const char* dir = std::getenv("ZRESCALE_OUT_DIR"))
    if (*dir) c.report.out_dir = dir;
}

RunResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  FamilySpec family = config_family(config);
  const Alpha alpha = make_alpha(config.alpha, config.zero_free);

  std::filesystem::create_directories(config.report.out_dir);

  // The construction assumes the probe point at the origin; recentering is an
  // affine reparameterization of the whole family.
  FamilySpec recentered = family;
  if (norm_sq(config.probe_center) != 0.0) {
    recentered.tmpl = affine_reparam(family.tmpl, config.probe_center, 1.0);
    recentered.domain.center = family.domain.center;
    for (int k = 0; k < config.dimension; ++k)
      recentered.domain.center[k] -= config.probe_center[k];
  }

  RunResult result;
  result.out_dir = config.report.out_dir;

  // Marty stage, continuing past per-j numeric failures.
  {
    const Ball compact{config.probe_center, config.report.ball_radius};
    require_inside_domain(compact, family.domain);
    BallProbeSet probes(compact, config.optimizer.grid_per_dim);
    result.marty.config = config.optimizer;
    for (long j : config.j_schedule) {
      try {
        ExprPtr f = instantiate(family, j);
        MaxResult m = maximize_over(
            probes, [&f](const CPoint& z) { return sharp(*f, z).value; },
            config.optimizer);
        result.marty.per_j.push_back(MartySample{j, m.value, std::move(m.argmax)});
      } catch (const NumericRangeError& e) {
        result.errors.push_back("marty j=" + std::to_string(j) + ": " + e.what());
      }
    }
    classify_growth(result.marty);
  }

  std::vector<RescalingStep> steps;
  for (long j : config.j_schedule) {
    StepRecord rec;
    rec.j = j;
    try {
      check_zero_free(recentered, j, *instantiate(recentered, j));
      rec.step = rescale_step(recentered, j, alpha, config.optimizer,
                              config.bisect_tol, config.report.ball_radius,
                              config.report.grid_per_dim);
      rec.status = StepStatus::Ok;
      steps.push_back(*rec.step);
    } catch (const PreconditionUnmet& e) {
      rec.status = StepStatus::PreconditionUnmet;
      rec.message = e.what();
    } catch (const ZeroFreeViolation& e) {
      rec.status = StepStatus::NumericError;
      rec.message = e.what();
    } catch (const NumericRangeError& e) {
      rec.status = StepStatus::NumericError;
      rec.message = e.what();
    }
    result.trace.push_back(std::move(rec));
  }

  if (steps.size() >= 2) {
    result.convergence = convergence_diagnostic(
        steps, config.report.ball_radius, config.report.grid_per_dim);
    bool non_increasing = true;
    for (std::size_t k = 1; k < steps.size(); ++k)
      non_increasing = non_increasing && steps[k].rho <= steps[k - 1].rho;
    result.rho_non_increasing = non_increasing;
    if (config.zero_free)
      result.dichotomy = zero_free_limit_check(*result.convergence, true);
  }

  bool all_unmet = true;
  for (const StepRecord& rec : result.trace)
    all_unmet = all_unmet && rec.status == StepStatus::PreconditionUnmet;
  if (all_unmet) {
    result.exit_code = 2;
  } else if (!result.convergence) {
    result.exit_code = 3;
  } else {
    result.exit_code =
        result.convergence->cauchy_verdict == CauchyVerdict::Converging ? 0 : 3;
  }

  write_trace_csv(config.report.out_dir / "rescaling_trace.csv", result.trace,
                  config.dimension);
  write_convergence_csv(config.report.out_dir / "convergence.csv",
                        result.convergence);

  ordered_json report;
  report["tool"] = {{"name", kToolName}, {"version", kVersion}};
  report["config"] = config_json(config);
  report["marty"] = marty_json(result.marty);
  report["rescaling_steps"] = trace_json(result.trace);
  report["convergence"] = result.convergence
                              ? convergence_json(*result.convergence)
                              : ordered_json(nullptr);
  ordered_json diagnostics = ordered_json::object();
  if (result.rho_non_increasing)
    diagnostics["rho_non_increasing"] = *result.rho_non_increasing;
  if (result.dichotomy)
    diagnostics["zero_free_dichotomy"] =
        *result.dichotomy == ZeroFreeFlag::Ok ? "OK" : "SUSPECT";
  report["diagnostics"] = diagnostics;
  report["errors"] = result.errors;
  report["exit_code"] = result.exit_code;
  std::ofstream out(config.report.out_dir / "report.json", std::ios::binary);
  if (!out)
    throw DomainError("cannot write " +
                      (config.report.out_dir / "report.json").string());
  out << report.dump(2) << '\n';

  return result;
}

}  // namespace zrescale
