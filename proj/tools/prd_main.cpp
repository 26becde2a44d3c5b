// Entry point: `prd simulate --config <path>` runs a configured simulation,
// `prd verify --level fast|full` runs the built-in verification suite.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "prd/cli.hpp"
#include "prd/config.hpp"
#include "prd/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion simulator for populations of bi-stable "
               "switches with diffusing thresholds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* simulate = app.add_subcommand("simulate", "run a configured simulation");
  simulate->add_option("--config", config_path, "configuration file")
      ->required();
  simulate->add_option("--out", out_dir,
                       "override the configured output directory");

  std::string level_name = "fast";
  std::uint64_t seed = 12345;
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--level", level_name, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--seed", seed, "seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  if (*simulate) {
    try {
      prd::RunConfig cfg = prd::load_config(config_path);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      return prd::cmd_simulate(cfg, std::cerr);
    } catch (const prd::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 1;
    }
  }
  const auto level =
      level_name == "full" ? prd::VerifyLevel::full : prd::VerifyLevel::fast;
  return prd::cmd_verify(level, seed, std::cout);
}
