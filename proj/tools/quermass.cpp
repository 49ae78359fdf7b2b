// quermass run <config> | verify <suite> [config] | sweep <config>

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "quermass/cli.hpp"
#include "quermass/error.hpp"

int main(int argc, char** argv) {
  namespace qc = quermass::cli;
  CLI::App app{"Inverse curvature flows of starshaped curves and surfaces"};
  app.require_subcommand(1);
  // Subcommands inherit this, so global options may follow the subcommand.
  app.fallthrough();

  qc::Options opt;
  app.add_option("--jobs,-j", opt.jobs, "Parallel workers for verify and sweep")
      ->check(CLI::PositiveNumber);
  app.add_option("--set", opt.overrides,
                 "Override a config entry, e.g. --set stepping.t_max=2")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_flag("--quiet,-q", opt.quiet, "Only print failures and the status line");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one flow and write its trajectory");
  run->add_option("config", run_config, "Config file")->required();

  std::string suite;
  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Check identities and inequalities");
  verify->add_option("suite", suite, "symfunc, geometry, prop1, lemma, variation, af, monotone or all")
      ->required();
  verify->add_option("config", verify_config, "Config file (optional)");

  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Run every combination of a sweep section");
  sweep->add_option("config", sweep_config, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return qc::cmd_run(run_config, opt, std::cout, std::cerr);
    if (*verify) {
      std::optional<std::string> cfg;
      if (!verify_config.empty()) cfg = verify_config;
      return qc::cmd_verify(suite, cfg, opt, std::cout, std::cerr);
    }
    return qc::cmd_sweep(sweep_config, opt, std::cout, std::cerr);
  } catch (const quermass::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
