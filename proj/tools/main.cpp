#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using ncsopt::cli::CommandOptions;
  CLI::App app{"Predictive gain synthesis for networked control with packet dropouts"};
  app.require_subcommand(1);

  CommandOptions options;
  std::string config, out, front;
  std::uint64_t seed = 0;
  app.add_option("--config", config, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides optimizer.master_seed)");
  app.add_option("--out", out, "output directory");

  app.add_subcommand("discretize", "zero-order-hold discretization of a continuous plant");
  auto* certify = app.add_subcommand("certify", "switched-Lyapunov stability certificate for a gain set");
  auto* simulate = app.add_subcommand("simulate", "one closed-loop run to trajectory.csv");
  auto* evaluate = app.add_subcommand("evaluate", "Monte-Carlo mean of the configured objective pair");
  auto* optimize = app.add_subcommand("optimize", "NSGA-II search for a Pareto front of gain sets");
  auto* reproduce = app.add_subcommand("reproduce", "check the reference gain sets of a built-in plant");
  for (auto* sub : {certify, simulate, evaluate}) {
    sub->add_option("--front", front, "take gains from this front CSV");
    sub->add_option("--row", options.row, "0-based data row of --front");
  }
  std::string test_problem, plant;
  auto* tp = optimize->add_option("--test-problem", test_problem, "analytic test problem (schaffer)");
  auto* plant_opt = reproduce->add_option("plant", plant, "dc_motor | double_integrator | inverted_pendulum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ncsopt::cli::kUsage;
  }
  if (!config.empty()) options.config = config;
  if (*seed_opt) options.seed = seed;
  if (!out.empty()) options.out = out;
  if (!front.empty()) options.front = front;
  if (*tp) options.test_problem = test_problem;
  if (*plant_opt) options.plant = plant;

  const std::string command = app.get_subcommands().front()->get_name();
  return ncsopt::cli::run_command(command, options, std::cout, std::cerr);
}
