#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floquet/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Floquet toolkit: quasienergies, effective Hamiltonians, Chern numbers, "
               "Green's functions and driven steady states"};
  app.set_version_flag("--version", floquet::cli::toolkit_version);
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config, "JSON run configuration")->required();
    cmd->add_option("--set", overrides, "Override a config entry, e.g. --set drive.omega=5");
  };

  auto* run = app.add_subcommand("run", "Run the configured task");
  add_common(run);

  std::string parameter, values;
  auto* sweep = app.add_subcommand("sweep", "Run the task once per parameter value");
  add_common(sweep);
  sweep->add_option("--param", parameter, "Dotted numeric config key, e.g. drive.amplitude")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : floquet::cli::exit_schema;
  }

  if (run->parsed()) return floquet::cli::run_command(config, overrides, std::cout, std::cerr);
  if (sweep->parsed()) {
    return floquet::cli::sweep_command(config, parameter, values, overrides, std::cout, std::cerr);
  }
  return floquet::cli::validate_command(config, overrides, std::cout, std::cerr);
}
