#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ncsopt/error.hpp"
#include "ncsopt/moga.hpp"
#include "ncsopt/synthesis.hpp"
#include "reference.hpp"

namespace {

using namespace ncsopt;

constexpr double kInf = std::numeric_limits<double>::infinity();

ObjectiveVector ov(double a, double b) { return {{a, b}, true}; }

Individual ind(double a, double b) { return Individual{{}, ov(a, b), 0, 0.0}; }

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(ov(1, 2), ov(2, 3)));
  EXPECT_FALSE(dominates(ov(1, 2), ov(1, 2)));
  EXPECT_FALSE(dominates(ov(1, 3), ov(2, 2)));
  EXPECT_FALSE(dominates(ov(2, 2), ov(1, 3)));
  EXPECT_TRUE(dominates(ov(1, 2), ov(1, 3)));
}

TEST(ConstrainedDominates, FeasibilityFirstThenViolation) {
  ObjectiveVector bad{{0, 0}, false, 1.5};
  ObjectiveVector worse{{0, 0}, false, 2.0};
  EXPECT_TRUE(constrained_dominates(ov(1e9, 1e9), bad));
  EXPECT_FALSE(constrained_dominates(bad, ov(1e9, 1e9)));
  EXPECT_TRUE(constrained_dominates(bad, worse));
  EXPECT_FALSE(constrained_dominates(worse, bad));
  EXPECT_FALSE(constrained_dominates(bad, bad));
  EXPECT_TRUE(constrained_dominates(ov(1, 1), ov(2, 2)));
}

TEST(NonDominatedSort, Examples) {
  std::vector<Individual> one{ind(5, 5)};
  EXPECT_EQ(fast_non_dominated_sort(one).size(), 1u);
  EXPECT_EQ(one[0].rank, 1);

  std::vector<Individual> pop{ind(1, 2), ind(2, 1), ind(3, 3)};
  const auto fronts = fast_non_dominated_sort(pop);
  ASSERT_EQ(fronts.size(), 2u);
  EXPECT_EQ(fronts[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(fronts[1], (std::vector<std::size_t>{2}));
  EXPECT_EQ(pop[2].rank, 2);
}

TEST(NonDominatedSort, MatchesBruteForceOnRandomPopulations) {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(50);
    std::vector<Individual> pop;
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse grid so ties and duplicates occur.
      const double a = std::floor(rng.uniform() * 8);
      const double b = std::floor(rng.uniform() * 8);
      pop.push_back(ind(a, b));
      pts.push_back({a, b});
    }
    const auto fronts = fast_non_dominated_sort(pop);
    const auto want = ncsopt::testing::brute_force_ranks(pts);
    std::size_t covered = 0;
    for (const auto& f : fronts) covered += f.size();
    EXPECT_EQ(covered, n);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(pop[i].rank, want[i]) << "trial " << trial;
  }
}

TEST(CrowdingDistance, Examples) {
  std::vector<Individual> two{ind(0, 1), ind(1, 0)};
  crowding_distance(two, std::vector<std::size_t>{0, 1});
  EXPECT_EQ(two[0].crowding, kInf);
  EXPECT_EQ(two[1].crowding, kInf);

  std::vector<Individual> three{ind(0, 2), ind(1, 1), ind(2, 0)};
  crowding_distance(three, std::vector<std::size_t>{0, 1, 2});
  EXPECT_DOUBLE_EQ(three[1].crowding, 2.0);
  EXPECT_EQ(three[0].crowding, kInf);

  std::vector<Individual> same{ind(1, 1), ind(1, 1), ind(1, 1), ind(1, 1)};
  crowding_distance(same, std::vector<std::size_t>{0, 1, 2, 3});
  int finite = 0;
  for (const auto& s : same) {
    EXPECT_FALSE(std::isnan(s.crowding));
    finite += std::isfinite(s.crowding) ? 1 : 0;
  }
  EXPECT_EQ(finite, 2);
}

TEST(TournamentSelect, RankThenCrowdingThenCoin) {
  Rng rng(1);
  std::vector<Individual> pop{ind(0, 0), ind(1, 1)};
  pop[0].rank = 1;
  pop[1].rank = 2;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(&tournament_select(pop, rng), &pop[0]);
  pop[1].rank = 1;
  pop[0].crowding = 0.5;
  pop[1].crowding = 2.0;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(&tournament_select(pop, rng), &pop[1]);
  pop[0].crowding = 2.0;
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += &tournament_select(pop, rng) == &pop[0] ? 1 : 0;
  // 3 sigma of Binomial(1e4, 0.5) is 150.
  EXPECT_NEAR(first, 5000, 150);
}

TEST(Vary, NoOperatorsCopiesParents) {
  OptimizerConfig cfg;
  cfg.crossover_fraction = 0.0;
  cfg.mutation_fraction = 0.0;
  Rng rng(3);
  const std::vector<double> a{0.1, -2, 3}, b{1, 2, -4};
  const auto [c1, c2] = vary(a, b, cfg, rng);
  EXPECT_EQ(c1, a);
  EXPECT_EQ(c2, b);
}

TEST(Vary, IdenticalParentsAreFixedPointOfCrossover) {
  OptimizerConfig cfg;
  cfg.crossover_fraction = 1.0;
  cfg.mutation_fraction = 0.0;
  Rng rng(4);
  const std::vector<double> a{0.3, -1.2, 4.9};
  for (int i = 0; i < 100; ++i) {
    const auto [c1, c2] = vary(a, a, cfg, rng);
    EXPECT_EQ(c1, a);
    EXPECT_EQ(c2, a);
  }
}

TEST(Vary, ChildrenStayInBounds) {
  OptimizerConfig cfg;
  cfg.mutation_fraction = 1.0;
  cfg.gene_bounds = {{-1, 1}, {0, 0.5}, {-5, 5}};
  Rng rng(5);
  std::vector<double> a{-1, 0.5, 5}, b{1, 0, -5};
  for (int i = 0; i < 100000; ++i) {
    auto [c1, c2] = vary(a, b, cfg, rng);
    for (std::size_t g = 0; g < 3; ++g) {
      ASSERT_GE(c1[g], cfg.gene_bounds[g].low);
      ASSERT_LE(c1[g], cfg.gene_bounds[g].high);
      ASSERT_GE(c2[g], cfg.gene_bounds[g].low);
      ASSERT_LE(c2[g], cfg.gene_bounds[g].high);
    }
    a = std::move(c1);
    b = std::move(c2);
  }
}

TEST(Vary, LengthMismatchThrows) {
  Rng rng(1);
  EXPECT_THROW(vary(std::vector<double>{1, 2}, std::vector<double>{1}, OptimizerConfig{}, rng), DimensionError);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.validate(6));
  EXPECT_EQ(c.front_capacity(), 32u);
  c.population = 5;
  EXPECT_THROW(c.validate(6), ConfigError);
  c.population = 2;
  EXPECT_THROW(c.validate(6), ConfigError);
  c = {};
  c.mutation_fraction = 1.5;
  EXPECT_THROW(c.validate(6), ConfigError);
  c = {};
  c.gene_bounds = {{0, 1}, {0, 1}};
  EXPECT_THROW(c.validate(6), ConfigError);
  c.gene_bounds = {{1, 0}};
  EXPECT_THROW(c.validate(6), ConfigError);
}

OptimizerConfig schaffer_config() {
  OptimizerConfig cfg;
  cfg.population = 90;
  cfg.generations = 100;
  cfg.gene_bounds = {{-10, 10}};
  cfg.master_seed = 11;
  return cfg;
}

TEST(Evolve, SchafferFrontConvergesToAnalyticSet) {
  const auto archive = evolve(schaffer_problem(), schaffer_config());
  ASSERT_FALSE(archive.members.empty());
  EXPECT_LE(archive.members.size(), 32u);
  EXPECT_LT(generational_distance(archive.members, schaffer_front_distance), 0.01);
  for (const auto& m : archive.members) {
    EXPECT_GE(m.genes[0], -1e-3);
    EXPECT_LE(m.genes[0], 2.0 + 1e-3);
  }
}

TEST(Evolve, ArchiveIsMutuallyNonDominatedAndSorted) {
  const auto archive = evolve(schaffer_problem(), schaffer_config());
  const auto& m = archive.members;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) EXPECT_FALSE(dominates(m[i].objectives, m[j].objectives));
    if (i > 0) EXPECT_LE(m[i - 1].objectives.values[0], m[i].objectives.values[0]);
  }
}

TEST(Evolve, ElitismAndConstantPopulation) {
  auto cfg = schaffer_config();
  cfg.generations = 40;
  std::array<double, 2> best{kInf, kInf};
  std::size_t calls = 0;
  evolve(schaffer_problem(), cfg, [&](int, std::span<const Individual> pop) {
    ++calls;
    EXPECT_EQ(pop.size(), 90u);
    std::array<double, 2> now{kInf, kInf};
    for (const auto& p : pop)
      for (int k = 0; k < 2; ++k) now[k] = std::min(now[k], p.objectives.values[k]);
    for (int k = 0; k < 2; ++k) EXPECT_LE(now[k], best[k]);
    best = now;
  });
  EXPECT_EQ(calls, 41u);
}

TEST(Evolve, DeterministicForSeedAndThreadCount) {
  auto cfg = schaffer_config();
  cfg.generations = 30;
  const auto a = evolve(schaffer_problem(), cfg);
  cfg.threads = 3;
  const auto b = evolve(schaffer_problem(), cfg);
  ASSERT_EQ(a.members.size(), b.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    EXPECT_EQ(a.members[i].genes, b.members[i].genes);
    EXPECT_EQ(a.members[i].objectives, b.members[i].objectives);
  }
  cfg.master_seed = 12;
  EXPECT_NE(evolve(schaffer_problem(), cfg).members.front().genes, a.members.front().genes);
}

TEST(Evolve, ErrorsAndDegenerateProblems) {
  Problem empty;
  EXPECT_THROW(evolve(empty, OptimizerConfig{}), ConfigError);
  auto p = schaffer_problem();
  OptimizerConfig cfg;
  cfg.population = 7;
  EXPECT_THROW(evolve(p, cfg), ConfigError);
  cfg = {};
  cfg.population = 8;
  cfg.generations = 0;
  EXPECT_EQ(evolve(p, cfg).generation, 0);
}

TEST(EvolveController, AllInfeasibleSearchSpaceYieldsPenaltyArchive) {
  SynthesisSetup setup;
  setup.plant = builtin_plant(BuiltinPlant::inverted_pendulum);
  setup.eval.mc_runs = 2;
  OptimizerConfig cfg;
  cfg.population = 8;
  cfg.generations = 3;
  cfg.gene_bounds = {{0, 0}};
  const auto archive = evolve_controller(setup, cfg);
  ASSERT_FALSE(archive.members.empty());
  for (const auto& m : archive.members) {
    EXPECT_FALSE(m.objectives.feasible);
    EXPECT_EQ(m.objectives.values[0], setup.eval.penalty);
    EXPECT_EQ(m.objectives.values[1], setup.eval.penalty);
    EXPECT_GE(m.objectives.violation, 1.0);
  }
}

TEST(ControllerProblem, CachesVerdictsAndSharesSeedsWithinGeneration) {
  SynthesisSetup setup;
  setup.plant = builtin_plant(BuiltinPlant::dc_motor);
  setup.eval.mc_runs = 3;
  CertificationCache cache;
  const auto problem = controller_problem(setup, 9, cache);
  const std::vector<double> genes{-0.155, 0.003, -0.047, 0.036, -0.152, -0.040};
  const auto a = problem.evaluate(genes, {4, 0});
  const auto b = problem.evaluate(genes, {4, 17});
  const auto c = problem.evaluate(genes, {5, 0});
  EXPECT_TRUE(a.feasible);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_EQ(cache.hits(), 2u);
}

TEST(Representatives, PicksExtremesAndMedianByFirstObjective) {
  ParetoArchive archive;
  for (double v : {3.0, 1.0, 4.0, 2.0, 5.0}) archive.members.push_back(ind(v, 10 - v));
  const auto r = representatives(archive);
  EXPECT_EQ(r.min, 1u);
  EXPECT_EQ(r.median, 0u);
  EXPECT_EQ(r.max, 4u);
  EXPECT_THROW(representatives(ParetoArchive{}), LookupError);
}

TEST(GenerationalDistance, RootMeanSquare) {
  std::vector<Individual> m{ind(0, 0), ind(0, 0)};
  int call = 0;
  const double gd = generational_distance(m, [&](double, double) { return ++call == 1 ? 3.0 : 4.0; });
  EXPECT_NEAR(gd, std::sqrt((9.0 + 16.0) / 2.0), 1e-15);
  EXPECT_NEAR(schaffer_front_distance(1.0, 1.0), 0.0, 1e-9);
  EXPECT_NEAR(schaffer_front_distance(0.0, 4.0), 0.0, 1e-9);
  EXPECT_GT(schaffer_front_distance(4.0, 4.0), 1.0);
}

}  // namespace
