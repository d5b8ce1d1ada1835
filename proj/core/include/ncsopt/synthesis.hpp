#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "ncsopt/moga.hpp"
#include "ncsopt/objectives.hpp"
#include "ncsopt/plant.hpp"
#include "ncsopt/stability.hpp"

namespace ncsopt {

/// Everything the controller search needs besides the optimizer settings.
struct SynthesisSetup {
  DiscretePlant plant;
  int max_drop = 3;
  TradeOff trade_off = TradeOff::J1J2;
  EvalConfig eval;
  CertifyOptions certify;

  std::size_t genome_length() const;
  void validate() const;
};

/// certify() verdicts keyed on the exact genome. Safe for concurrent use.
class CertificationCache {
 public:
  bool certified(std::span<const double> genes, const SwitchedClosedLoop& loop,
                 const CertifyOptions& options);

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::vector<double>, bool> verdicts_;
  std::size_t hits_ = 0;
};

/// Gain-schedule search problem: certify (cached) then Monte-Carlo evaluate.
/// Every individual of generation g shares the drop traces drawn from
/// monte_carlo_seeds(master_seed, g, mc_runs). Infeasible schedules get the
/// penalty vector with feasible = false; their violation is
/// switching_radius_bound (+infinity after a numerical failure).
Problem controller_problem(const SynthesisSetup& setup, std::uint64_t master_seed,
                           CertificationCache& cache);

ParetoArchive evolve_controller(const SynthesisSetup& setup, const OptimizerConfig& cfg,
                                const GenerationObserver& observer = {});

/// Indices of the extreme and median members by first objective.
struct Representatives {
  std::size_t min = 0;
  std::size_t median = 0;
  std::size_t max = 0;
};

Representatives representatives(const ParetoArchive& archive);

}  // namespace ncsopt
