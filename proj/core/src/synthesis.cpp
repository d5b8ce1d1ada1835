#include "ncsopt/synthesis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ncsopt/error.hpp"
#include "ncsopt/gain_schedule.hpp"

namespace ncsopt {

namespace {

// Certified schedules whose simulation diverged numerically, or whose
// analysis threw, rank behind every other infeasible schedule.
constexpr double kFailedViolation = std::numeric_limits<double>::infinity();

}  // namespace

std::size_t SynthesisSetup::genome_length() const {
  return static_cast<std::size_t>(max_drop) * static_cast<std::size_t>(plant.inputs()) *
         static_cast<std::size_t>(plant.order());
}

void SynthesisSetup::validate() const {
  plant.validate();
  if (max_drop < 1) throw ConfigError("M_drop must be >= 1");
  eval.validate();
  if (!(certify.margin > 0.0)) throw ConfigError("certify.margin must be > 0");
  if (certify.budget < 1) throw ConfigError("certify.budget must be >= 1");
  if (!(certify.upper_bound > 0.0)) throw ConfigError("certify.upper_bound must be > 0");
}

bool CertificationCache::certified(std::span<const double> genes, const SwitchedClosedLoop& loop,
                                   const CertifyOptions& options) {
  std::vector<double> key(genes.begin(), genes.end());
  {
    std::lock_guard lock(mutex_);
    if (auto it = verdicts_.find(key); it != verdicts_.end()) {
      ++hits_;
      return it->second;
    }
  }
  // Solved outside the lock; a concurrent duplicate just solves twice.
  const bool verdict = certify(loop, options).certified();
  std::lock_guard lock(mutex_);
  verdicts_.emplace(std::move(key), verdict);
  return verdict;
}

std::size_t CertificationCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

std::size_t CertificationCache::misses() const {
  std::lock_guard lock(mutex_);
  return verdicts_.size();
}

Problem controller_problem(const SynthesisSetup& setup, std::uint64_t master_seed,
                           CertificationCache& cache) {
  setup.validate();
  Problem problem;
  problem.genome_length = setup.genome_length();
  problem.evaluate = [&setup, &cache, master_seed](std::span<const double> genes,
                                                   const EvaluationContext& ctx) {
    const double penalty = setup.eval.penalty;
    try {
      const auto gains = GainSchedule::from_genes(genes, setup.max_drop, setup.plant.inputs(),
                                                  setup.plant.order());
      const auto loop = build_switched(setup.plant, gains);
      const bool feasible = cache.certified(genes, loop, setup.certify);
      const auto seeds = monte_carlo_seeds(master_seed, static_cast<std::uint64_t>(ctx.generation),
                                           setup.eval.mc_runs);
      auto result = evaluate(gains, setup.plant, setup.trade_off, setup.eval, feasible, seeds);
      if (!feasible) {
        // Continues below 1 for Schur but uncertified schedules, so the search
        // keeps moving toward a larger stability margin.
        result.violation = switching_radius_bound(loop, std::max(1, setup.certify.product_length));
      } else if (!result.feasible) {
        result.violation = kFailedViolation;
      }
      return result;
    } catch (const NumericalFailure&) {
      return ObjectiveVector{{penalty, penalty}, false, kFailedViolation};
    } catch (const DomainError&) {
      return ObjectiveVector{{penalty, penalty}, false, kFailedViolation};
    }
  };
  return problem;
}

ParetoArchive evolve_controller(const SynthesisSetup& setup, const OptimizerConfig& cfg,
                                const GenerationObserver& observer) {
  CertificationCache cache;
  return evolve(controller_problem(setup, cfg.master_seed, cache), cfg, observer);
}

Representatives representatives(const ParetoArchive& archive) {
  if (archive.members.empty()) throw LookupError("representatives: empty archive");
  std::vector<std::size_t> order(archive.members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return archive.members[a].objectives.values[0] < archive.members[b].objectives.values[0];
  });
  return Representatives{order.front(), order[(order.size() - 1) / 2], order.back()};
}

}  // namespace ncsopt
