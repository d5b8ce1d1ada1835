#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ncsopt/objectives.hpp"
#include "ncsopt/rng.hpp"

namespace ncsopt {

struct Bounds {
  double low = -5.0;
  double high = 5.0;
};

struct OptimizerConfig {
  int population = 90;
  int generations = 200;
  double crossover_fraction = 0.8;
  double mutation_fraction = 0.2;
  /// Reported front is capped at ceil(pareto_fraction * population) members.
  double pareto_fraction = 0.35;
  /// One entry per gene, or a single entry applied to every gene.
  std::vector<Bounds> gene_bounds{Bounds{}};
  std::uint64_t master_seed = 1;
  double eta_crossover = 15.0;
  double eta_mutation = 20.0;
  /// Worker threads for objective evaluation; results do not depend on it.
  int threads = 1;

  void validate(std::size_t genome_length) const;
  Bounds bounds_for(std::size_t gene) const;
  std::size_t front_capacity() const;
};

struct Individual {
  std::vector<double> genes;
  ObjectiveVector objectives;
  int rank = 0;          // 1 = non-dominated front
  double crowding = 0.0;
};

struct ParetoArchive {
  std::vector<Individual> members;
  int generation = 0;
};

struct EvaluationContext {
  int generation = 0;
  std::size_t index = 0;
};

using Evaluator = std::function<ObjectiveVector(std::span<const double>, const EvaluationContext&)>;

struct Problem {
  std::size_t genome_length = 0;
  Evaluator evaluate;
};

/// Called after each generation's environmental selection (generation 0 is
/// the initial population).
using GenerationObserver = std::function<void(int, std::span<const Individual>)>;

/// a <= b componentwise with at least one strict inequality.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Selection order used by the sorter. Feasibility decides first; two
/// infeasible vectors compare by violation. Feasible pairs use dominates().
bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Partitions `pop` (under constrained_dominates) into fronts of indices and stores each member's rank.
std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<Individual> pop);

/// Assigns crowding distance to the members of `front` (indices into pop).
void crowding_distance(std::span<Individual> pop, std::span<const std::size_t> front);

/// Binary tournament: lower rank, then larger crowding, then a coin flip.
const Individual& tournament_select(std::span<const Individual> pop, Rng& rng);

/// SBX crossover (gated by crossover_fraction) followed by polynomial mutation
/// of one gene per child (gated by mutation_fraction). Children are clamped to
/// the gene bounds.
std::pair<std::vector<double>, std::vector<double>> vary(std::span<const double> a,
                                                         std::span<const double> b,
                                                         const OptimizerConfig& cfg, Rng& rng);

/// NSGA-II with elitist (parent + child) environmental selection.
ParetoArchive evolve(const Problem& problem, const OptimizerConfig& cfg,
                     const GenerationObserver& observer = {});

/// Schaffer's single-variable test problem: f1 = x^2, f2 = (x - 2)^2.
Problem schaffer_problem();

/// Euclidean distance in objective space from (f1, f2) to Schaffer's
/// analytic front {(x^2, (x - 2)^2) : 0 <= x <= 2}.
double schaffer_front_distance(double f1, double f2);

/// Root-mean-square of `distance` over the members' objective vectors.
double generational_distance(std::span<const Individual> members,
                             const std::function<double(double, double)>& distance);

}  // namespace ncsopt
