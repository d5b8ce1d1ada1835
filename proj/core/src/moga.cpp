#include "ncsopt/moga.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "ncsopt/error.hpp"

namespace ncsopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void evaluate_batch(const Problem& problem, std::vector<Individual>& batch, int generation,
                    int threads) {
  auto run_one = [&](std::size_t i) {
    batch[i].objectives = problem.evaluate(batch[i].genes, EvaluationContext{generation, i});
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), batch.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) run_one(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < batch.size(); i = next++) {
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double sbx_spread(double rand, double beta, double eta) {
  const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
  if (rand <= 1.0 / alpha) return std::pow(rand * alpha, 1.0 / (eta + 1.0));
  return std::pow(1.0 / (2.0 - rand * alpha), 1.0 / (eta + 1.0));
}

double polynomial_mutation(double y, Bounds b, double eta, Rng& rng) {
  const double range = b.high - b.low;
  if (!(range > 0.0)) return b.low;
  const double d1 = (y - b.low) / range;
  const double d2 = (b.high - y) / range;
  const double rnd = rng.uniform();
  const double power = 1.0 / (eta + 1.0);
  double dq = 0.0;
  if (rnd < 0.5) {
    const double val = 2.0 * rnd + (1.0 - 2.0 * rnd) * std::pow(1.0 - d1, eta + 1.0);
    dq = std::pow(val, power) - 1.0;
  } else {
    const double val = 2.0 * (1.0 - rnd) + 2.0 * (rnd - 0.5) * std::pow(1.0 - d2, eta + 1.0);
    dq = 1.0 - std::pow(val, power);
  }
  return std::clamp(y + dq * range, b.low, b.high);
}

}  // namespace

void OptimizerConfig::validate(std::size_t genome_length) const {
  if (population < 4 || population % 2 != 0) {
    throw ConfigError("optimizer.population must be even and >= 4");
  }
  if (generations < 0) throw ConfigError("optimizer.generations must be >= 0");
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string("optimizer.") + name + " must be in [0, 1]");
  };
  fraction(crossover_fraction, "crossover_fraction");
  fraction(mutation_fraction, "mutation_fraction");
  fraction(pareto_fraction, "pareto_fraction");
  if (gene_bounds.empty()) throw ConfigError("optimizer.gene_bounds must not be empty");
  if (gene_bounds.size() != 1 && gene_bounds.size() != genome_length) {
    throw ConfigError("optimizer.gene_bounds must have 1 or " + std::to_string(genome_length) +
                      " entries");
  }
  for (const auto& b : gene_bounds) {
    if (!(b.low <= b.high) || !std::isfinite(b.low) || !std::isfinite(b.high)) {
      throw ConfigError("optimizer.gene_bounds: low must be <= high and finite");
    }
  }
  if (!(eta_crossover > 0.0) || !(eta_mutation > 0.0)) {
    throw ConfigError("optimizer: distribution indices must be > 0");
  }
}

Bounds OptimizerConfig::bounds_for(std::size_t gene) const {
  return gene_bounds.size() == 1 ? gene_bounds.front() : gene_bounds.at(gene);
}

std::size_t OptimizerConfig::front_capacity() const {
  const double cap = std::ceil(pareto_fraction * static_cast<double>(population) - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, cap));
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] > b.values[i]) return false;
    if (a.values[i] < b.values[i]) strictly_better = true;
  }
  return strictly_better;
}

bool constrained_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return a.violation < b.violation;
  return dominates(a, b);
}

std::vector<std::vector<std::size_t>> fast_non_dominated_sort(std::span<Individual> pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (constrained_dominates(pop[p].objectives, pop[q].objectives)) {
        dominated_by[p].push_back(q);
      } else if (constrained_dominates(pop[q].objectives, pop[p].objectives)) {
        ++domination_count[p];
      }
    }
    if (domination_count[p] == 0) {
      pop[p].rank = 1;
      fronts[0].push_back(p);
    }
  }
  for (std::size_t f = 0; !fronts[f].empty(); ++f) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[f]) {
      for (std::size_t q : dominated_by[p]) {
        if (--domination_count[q] == 0) {
          pop[q].rank = static_cast<int>(f) + 2;
          next.push_back(q);
        }
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

void crowding_distance(std::span<Individual> pop, std::span<const std::size_t> front) {
  for (std::size_t i : front) pop[i].crowding = 0.0;
  if (front.size() <= 2) {
    for (std::size_t i : front) pop[i].crowding = kInf;
    return;
  }
  std::vector<std::size_t> order(front.begin(), front.end());
  const std::size_t objectives = pop[front.front()].objectives.values.size();
  for (std::size_t m = 0; m < objectives; ++m) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].objectives.values[m] < pop[b].objectives.values[m];
    });
    const double lo = pop[order.front()].objectives.values[m];
    const double hi = pop[order.back()].objectives.values[m];
    pop[order.front()].crowding = kInf;
    pop[order.back()].crowding = kInf;
    const double range = hi - lo;
    if (!(range > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
      Individual& ind = pop[order[k]];
      if (std::isinf(ind.crowding)) continue;
      ind.crowding += (pop[order[k + 1]].objectives.values[m] -
                       pop[order[k - 1]].objectives.values[m]) / range;
    }
  }
}

const Individual& tournament_select(std::span<const Individual> pop, Rng& rng) {
  if (pop.empty()) throw ConfigError("tournament_select: empty population");
  if (pop.size() == 1) return pop.front();
  const std::size_t i = rng.index(pop.size());
  std::size_t j = rng.index(pop.size() - 1);
  if (j >= i) ++j;
  const Individual& a = pop[i];
  const Individual& b = pop[j];
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  if (a.crowding != b.crowding) return a.crowding > b.crowding ? a : b;
  return rng.coin() ? a : b;
}

std::pair<std::vector<double>, std::vector<double>> vary(std::span<const double> a,
                                                         std::span<const double> b,
                                                         const OptimizerConfig& cfg, Rng& rng) {
  if (a.size() != b.size()) throw DimensionError("vary: parents differ in genome length");
  std::vector<double> c1(a.begin(), a.end());
  std::vector<double> c2(b.begin(), b.end());
  const std::size_t len = a.size();

  if (rng.uniform() < cfg.crossover_fraction) {
    for (std::size_t g = 0; g < len; ++g) {
      if (rng.uniform() >= 0.5) continue;
      const double y1 = std::min(a[g], b[g]);
      const double y2 = std::max(a[g], b[g]);
      if (y2 - y1 <= 1e-14) continue;
      const Bounds bd = cfg.bounds_for(g);
      const double rand = rng.uniform();
      const double span = y2 - y1;
      const double bq1 = sbx_spread(rand, 1.0 + 2.0 * (y1 - bd.low) / span, cfg.eta_crossover);
      const double bq2 = sbx_spread(rand, 1.0 + 2.0 * (bd.high - y2) / span, cfg.eta_crossover);
      double v1 = std::clamp(0.5 * ((y1 + y2) - bq1 * span), bd.low, bd.high);
      double v2 = std::clamp(0.5 * ((y1 + y2) + bq2 * span), bd.low, bd.high);
      if (rng.coin()) std::swap(v1, v2);
      c1[g] = v1;
      c2[g] = v2;
    }
  }
  for (auto* child : {&c1, &c2}) {
    if (len == 0 || rng.uniform() >= cfg.mutation_fraction) continue;
    const std::size_t g = rng.index(len);
    (*child)[g] = polynomial_mutation((*child)[g], cfg.bounds_for(g), cfg.eta_mutation, rng);
  }
  for (std::size_t g = 0; g < len; ++g) {
    const Bounds bd = cfg.bounds_for(g);
    c1[g] = std::clamp(c1[g], bd.low, bd.high);
    c2[g] = std::clamp(c2[g], bd.low, bd.high);
  }
  return {std::move(c1), std::move(c2)};
}

ParetoArchive evolve(const Problem& problem, const OptimizerConfig& cfg,
                     const GenerationObserver& observer) {
  if (!problem.evaluate) throw ConfigError("evolve: problem has no evaluator");
  if (problem.genome_length == 0) throw ConfigError("evolve: empty genome");
  cfg.validate(problem.genome_length);
  const auto n = static_cast<std::size_t>(cfg.population);
  Rng rng(derive_seed(cfg.master_seed, 0x5EED));

  std::vector<Individual> population(n);
  for (auto& ind : population) {
    ind.genes.resize(problem.genome_length);
    for (std::size_t g = 0; g < problem.genome_length; ++g) {
      const Bounds b = cfg.bounds_for(g);
      ind.genes[g] = rng.uniform(b.low, b.high);
    }
  }
  evaluate_batch(problem, population, 0, cfg.threads);
  for (const auto& front : fast_non_dominated_sort(population)) crowding_distance(population, front);
  if (observer) observer(0, population);

  for (int gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<Individual> children;
    children.reserve(n);
    while (children.size() < n) {
      const Individual& p1 = tournament_select(population, rng);
      const Individual& p2 = tournament_select(population, rng);
      auto [g1, g2] = vary(p1.genes, p2.genes, cfg, rng);
      children.push_back(Individual{std::move(g1), {}, 0, 0.0});
      if (children.size() < n) children.push_back(Individual{std::move(g2), {}, 0, 0.0});
    }
    evaluate_batch(problem, children, gen, cfg.threads);

    std::vector<Individual> merged = std::move(population);
    merged.insert(merged.end(), std::make_move_iterator(children.begin()),
                  std::make_move_iterator(children.end()));
    const auto fronts = fast_non_dominated_sort(merged);

    std::vector<Individual> next;
    next.reserve(n);
    for (const auto& front : fronts) {
      crowding_distance(merged, front);
      if (next.size() + front.size() <= n) {
        for (std::size_t i : front) next.push_back(merged[i]);
        if (next.size() == n) break;
        continue;
      }
      std::vector<std::size_t> order(front.begin(), front.end());
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return merged[a].crowding > merged[b].crowding;
      });
      for (std::size_t k = 0; next.size() < n; ++k) next.push_back(merged[order[k]]);
      break;
    }
    population = std::move(next);
    if (observer) observer(gen, population);
  }

  std::vector<Individual> first;
  for (const auto& ind : population)
    if (ind.rank == 1) first.push_back(ind);
  std::vector<std::size_t> all(first.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  crowding_distance(first, all);
  const std::size_t cap = cfg.front_capacity();
  if (first.size() > cap) {
    std::stable_sort(first.begin(), first.end(), [](const Individual& a, const Individual& b) {
      return a.crowding > b.crowding;
    });
    first.resize(cap);
    std::iota(all.begin(), all.end(), std::size_t{0});
    all.resize(cap);
    crowding_distance(first, all);
  }
  std::stable_sort(first.begin(), first.end(), [](const Individual& a, const Individual& b) {
    return a.objectives.values[0] < b.objectives.values[0];
  });
  return ParetoArchive{std::move(first), cfg.generations};
}

Problem schaffer_problem() {
  Problem p;
  p.genome_length = 1;
  p.evaluate = [](std::span<const double> genes, const EvaluationContext&) {
    const double x = genes[0];
    return ObjectiveVector{{x * x, (x - 2.0) * (x - 2.0)}, true};
  };
  return p;
}

double schaffer_front_distance(double f1, double f2) {
  auto sq = [&](double x) {
    const double d1 = x * x - f1;
    const double d2 = (x - 2.0) * (x - 2.0) - f2;
    return d1 * d1 + d2 * d2;
  };
  // Coarse scan, then golden-section refinement around the best grid point.
  constexpr int kGrid = 2000;
  int best = 0;
  for (int i = 1; i <= kGrid; ++i) {
    if (sq(2.0 * i / kGrid) < sq(2.0 * best / kGrid)) best = i;
  }
  double lo = 2.0 * std::max(best - 1, 0) / kGrid;
  double hi = 2.0 * std::min(best + 1, kGrid) / kGrid;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double a = hi - ratio * (hi - lo);
    const double b = lo + ratio * (hi - lo);
    if (sq(a) < sq(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return std::sqrt(std::min({sq(0.5 * (lo + hi)), sq(lo), sq(hi)}));
}

double generational_distance(std::span<const Individual> members,
                             const std::function<double(double, double)>& distance) {
  if (members.empty()) throw ConfigError("generational_distance: empty front");
  double sum = 0.0;
  for (const auto& m : members) {
    const double d = distance(m.objectives.values[0], m.objectives.values[1]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(members.size()));
}

}  // namespace ncsopt
