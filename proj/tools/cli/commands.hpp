#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cli/config.hpp"
#include "ncsopt/objectives.hpp"
#include "ncsopt/plant.hpp"

namespace ncsopt::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kUsage = 2 };

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> front;  // certify/simulate/evaluate: gains from a front CSV
  std::size_t row = 0;                          // 0-based data row of `front`
  std::optional<std::string> test_problem;      // optimize
  std::optional<std::string> plant;             // reproduce
};

/// Runs one command and maps every failure onto the exit-code contract:
/// configuration and usage problems give kUsage, analysis-negative verdicts
/// give kNegative. Reports go to `out`, diagnostics to `err`.
int run_command(std::string_view command, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_discretize(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_certify(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_optimize(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);
int cmd_reproduce(const RunConfig& cfg, const CommandOptions& options, std::ostream& out);

struct GainSetReport {
  std::string label;
  TradeOff trade_off = TradeOff::J1J2;
  std::vector<double> spectral_radii;
  bool schur = false;
  bool certified = false;
  int iterations = 0;
  double certify_seconds = 0.0;
  ObjectiveVector mean;
};

struct OrderingReport {
  TradeOff trade_off = TradeOff::J1J2;
  bool first_increasing = false;   // J_a(A) < J_a(B) < J_a(C)
  bool second_decreasing = false;  // J_b(A) > J_b(B) > J_b(C)

  bool holds() const { return first_increasing && second_decreasing; }
};

struct ReproduceReport {
  BuiltinPlant plant = BuiltinPlant::dc_motor;
  std::vector<GainSetReport> sets;
  std::vector<OrderingReport> orderings;

  int schur_count() const;
  int certified_count() const;
  int ordering_count() const;
  /// All Schur, at least 8 of 9 certified, at least 2 of 3 orderings.
  bool passed() const;
};

/// Checks the nine reference gain sets of `plant`. Mean objectives use
/// eval.mc_runs runs per set; the three sets of one trade-off share traces.
ReproduceReport reproduce(BuiltinPlant plant, const EvalConfig& eval, const CertifyOptions& certify,
                          std::uint64_t seed);

}  // namespace ncsopt::cli
