// Command-line front end: runs experiments from JSON configs and lists the
// built-in family catalogue.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "zrescale/catalogue.hpp"
#include "zrescale/errors.hpp"
#include "zrescale/experiment.hpp"
#include "zrescale/version.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  try {
    zrescale::ExperimentConfig config = zrescale::load_config(config_path);
    zrescale::apply_env_overrides(config);
    zrescale::validate(config);
    zrescale::RunResult result = zrescale::run_experiment(config);
    std::printf("wrote %s (exit %d)\n", result.out_dir.string().c_str(),
                result.exit_code);
    return result.exit_code;
  } catch (const zrescale::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_catalogue() {
  for (const zrescale::CatalogueEntry& e : zrescale::catalogue()) {
    std::printf("%-14s  %-14s  n=%d%s\n", e.name.c_str(), e.expression.c_str(),
                e.dimension, e.zero_free ? "  zero_free" : "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rescaling laboratory for families of holomorphic functions "
               "on C^n"};
  app.set_version_flag("--version",
                       std::string(zrescale::kToolName) + " " +
                           zrescale::kVersion);
  app.require_subcommand(0, 1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON config file")->required();
  CLI::App* cat = app.add_subcommand("catalogue", "list built-in families");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path);
  if (cat->parsed()) return cmd_catalogue();
  std::puts(app.help().c_str());
  return 0;
}
