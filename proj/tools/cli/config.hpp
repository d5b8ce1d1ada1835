#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ncsopt/moga.hpp"
#include "ncsopt/objectives.hpp"
#include "ncsopt/plant.hpp"
#include "ncsopt/stability.hpp"

namespace ncsopt::cli {

/// Plant as written in the config. `builtin` is set for named plants;
/// `continuous` is set when the config gave A and B (F and G are then the
/// zero-order-hold discretization).
struct PlantSpec {
  std::string label;
  std::optional<BuiltinPlant> builtin;
  std::optional<ContinuousPlant> continuous;
  DiscretePlant discrete;
};

/// Parsed run configuration. Schema (every key optional, unknown keys rejected):
///
///   plant        "dc_motor" | {F, G, Ts, x0} | {A, B, Ts, x0?}
///   M_drop       integer >= 1
///   trade_off    "J1J2" | "J3J2" | "J4J5"
///   gains        flat genome, [[K_1 row], ...] or [[[K_1]], ...]
///   eval         {horizon, mc_runs, p_drop, settling_band, settling_confirm,
///                 ma_span, penalty, peak_epsilon}
///   optimizer    {population, generations, crossover_fraction, mutation_fraction,
///                 pareto_fraction, gene_bounds, master_seed, threads}
///   certify      {margin, budget, upper_bound}
///   test_problem "schaffer"
///   output_dir   path
struct RunConfig {
  std::optional<PlantSpec> plant;
  int max_drop = 3;
  TradeOff trade_off = TradeOff::J1J2;
  std::optional<std::vector<double>> gains;
  EvalConfig eval;
  OptimizerConfig optimizer;
  CertifyOptions certify;
  std::optional<std::string> test_problem;
  std::optional<std::filesystem::path> output_dir;
  /// Dotted names of the keys present in the file ("eval.mc_runs", ...).
  std::set<std::string> given;

  bool has(std::string_view key) const { return given.count(std::string(key)) != 0; }
  const PlantSpec& require_plant() const;
  const std::vector<double>& require_gains() const;
};

/// Throws ConfigError when the JSON is malformed or a key is unknown. Values
/// are also checked against their module's validation.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace ncsopt::cli
