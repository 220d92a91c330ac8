// Command-line front end: simulate, targeting and compare subcommands.

#include <iostream>

#include "CLI11.hpp"
#include "gullivr/commands.hpp"

int main(int argc, char** argv) {
  using namespace gullivr;

  CLI::App app{"Headless GulliVR locomotion simulator"};
  app.require_subcommand(1);

  CommandOptions options;
  std::uint64_t seed = 0;
  std::uint64_t ticks_cap = 0;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", options.config, "Scenario configuration (JSON)")
        ->required();
    cmd->add_option("--out", options.out_dir, "Output directory")->required();
    cmd->add_option("--ticks-cap", ticks_cap, "Abort after this many simulation ticks");
  };

  auto* simulate = app.add_subcommand("simulate", "Run one scripted scenario and log telemetry");
  add_common(simulate);
  simulate->add_option("--seed", seed, "Random seed (defaults to agent.rng_seed)");
  std::string policy_flag;
  simulate->add_option("--policy", policy_flag, "Locomotion policy")
      ->check(CLI::IsMember({"gullivr", "teleport"}));

  auto* targeting = app.add_subcommand("targeting", "Run the GM->NM targeting task");
  add_common(targeting);
  targeting->add_option("--seed", seed, "Random seed (defaults to agent.rng_seed)");
  double sigma = -1.0;
  targeting->add_option("--sigma", sigma, "Aim noise standard deviation in room-scale metres")
      ->check(CLI::NonNegativeNumber);

  auto* compare = app.add_subcommand("compare", "Run both policies over several seeds");
  add_common(compare);
  std::vector<std::uint64_t> seeds;
  compare->add_option("--seed,--seeds", seeds, "Seeds to run (repeat or comma-separate)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (ticks_cap > 0) options.ticks_cap = ticks_cap;
  if (simulate->parsed()) {
    if (simulate->count("--seed")) options.seed = seed;
    std::optional<Policy> policy;
    if (!policy_flag.empty()) policy = parse_policy(policy_flag);
    return cmd_simulate(options, policy, std::cerr);
  }
  if (targeting->parsed()) {
    if (targeting->count("--seed")) options.seed = seed;
    std::optional<double> noise;
    if (targeting->count("--sigma")) noise = sigma;
    return cmd_targeting(options, noise, std::cerr);
  }
  return cmd_compare(options, seeds, std::cerr);
}
