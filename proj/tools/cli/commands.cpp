#include "cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cli/reference_gains.hpp"
#include "ncsopt/error.hpp"
#include "ncsopt/gain_schedule.hpp"
#include "ncsopt/io.hpp"
#include "ncsopt/moga.hpp"
#include "ncsopt/netsim.hpp"
#include "ncsopt/rng.hpp"
#include "ncsopt/stability.hpp"
#include "ncsopt/synthesis.hpp"

namespace ncsopt::cli {

namespace {

// Stream id for the drop trace used by `simulate` and by optimize's
// representative trajectories.
constexpr std::uint64_t kTrajectoryStream = 0x7452414A;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t resolve_seed(const RunConfig& cfg, const CommandOptions& options) {
  return options.seed.value_or(cfg.optimizer.master_seed);
}

std::filesystem::path output_dir(const RunConfig& cfg, const CommandOptions& options) {
  std::filesystem::path dir = options.out ? *options.out : cfg.output_dir.value_or(".");
  std::filesystem::create_directories(dir);
  return dir;
}

template <class Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  writer(file);
  file.close();
  if (!file) throw ConfigError("failed writing '" + path.string() + "'");
  return path;
}

std::vector<double> resolve_gains(const RunConfig& cfg, const CommandOptions& options) {
  if (!options.front) return cfg.require_gains();
  std::ifstream in(*options.front);
  if (!in) throw ConfigError("cannot open front '" + options.front->string() + "'");
  const auto rows = io::read_front_csv(in);
  if (options.row >= rows.size()) {
    throw ConfigError("--row " + std::to_string(options.row) + " out of range (front has " +
                      std::to_string(rows.size()) + " rows)");
  }
  return rows[options.row].genes;
}

GainSchedule schedule_for(const RunConfig& cfg, const CommandOptions& options) {
  const auto& plant = cfg.require_plant().discrete;
  const auto genes = resolve_gains(cfg, options);
  return GainSchedule::from_genes(genes, cfg.max_drop, plant.inputs(), plant.order());
}

}  // namespace

int cmd_discretize(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  const PlantSpec& spec = cfg.require_plant();
  DiscretePlant discrete;
  if (spec.continuous) {
    discrete = spec.discrete;
  } else if (spec.builtin) {
    discrete = zoh_discretize(builtin_continuous(*spec.builtin), spec.discrete.ts);
  } else {
    throw ConfigError("discretize needs a continuous plant {A, B, Ts} or a built-in name");
  }
  std::ostringstream text;
  io::write_plant_json(text, discrete);
  out << text.str();
  if (options.out || cfg.output_dir) {
    const auto path = write_file(output_dir(cfg, options) / "plant.json",
                                 [&](std::ostream& f) { f << text.str(); });
    out << "wrote " << path.string() << '\n';
  }
  return kSuccess;
}

int cmd_certify(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  const auto& plant = cfg.require_plant().discrete;
  const auto gains = schedule_for(cfg, options);
  const auto loop = build_switched(plant, gains);
  const auto radii = spectral_radii(loop);
  out << "spectral radii:";
  for (double r : radii) out << ' ' << short_number(r);
  out << '\n';

  const auto result = certify(loop, cfg.certify);
  if (result.schur_rejected) {
    out << "verdict: not certified (a closed-loop mode is not Schur stable)\n";
    return kNegative;
  }
  if (!result.certified()) {
    out << "verdict: not certified within " << result.iterations << " iterations\n";
    return kNegative;
  }
  const auto& cert = *result.certificate;
  const auto margins = certificate_margins(loop, cert.p);
  out << "verdict: certified (margin " << short_number(cert.margin) << ", " << cert.iterations
      << " iterations)\n";
  for (std::size_t i = 0; i < margins.p_min.size(); ++i) {
    out << "lambda_min(P" << i + 1 << ") = " << short_number(margins.p_min[i]) << '\n';
  }
  for (Eigen::Index i = 0; i < margins.decrease_max.rows(); ++i) {
    for (Eigen::Index j = 0; j < margins.decrease_max.cols(); ++j) {
      out << "lambda_max(Phi" << i + 1 << "' P" << j + 1 << " Phi" << i + 1 << " - P" << i + 1
          << ") = " << short_number(margins.decrease_max(i, j)) << '\n';
    }
  }
  const auto path = write_file(output_dir(cfg, options) / "certificate.json",
                               [&](std::ostream& f) { io::write_certificate_json(f, cert); });
  out << "wrote " << path.string() << '\n';
  return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  const auto& plant = cfg.require_plant().discrete;
  const auto gains = schedule_for(cfg, options);
  const auto seed = monte_carlo_seeds(resolve_seed(cfg, options), kTrajectoryStream, 1).front();
  const auto trace = generate_drop_trace(cfg.eval.steps(plant.ts), cfg.eval.p_drop, cfg.max_drop, seed);
  const auto traj = simulate_closed_loop(plant, gains, trace);
  const auto path = write_file(output_dir(cfg, options) / "trajectory.csv",
                               [&](std::ostream& f) { io::write_trajectory_csv(f, traj); });
  out << "wrote " << path.string() << " (" << traj.steps() + 1 << " rows, drop fraction "
      << short_number(trace.drop_fraction()) << ")\n";
  return kSuccess;
}

int cmd_evaluate(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  const auto& plant = cfg.require_plant().discrete;
  const auto gains = schedule_for(cfg, options);
  const auto loop = build_switched(plant, gains);
  const bool feasible = certify(loop, cfg.certify).certified();
  const auto seeds = monte_carlo_seeds(resolve_seed(cfg, options), 0, cfg.eval.mc_runs);
  const auto result = evaluate(gains, plant, cfg.trade_off, cfg.eval, feasible, seeds);
  out << "trade_off " << to_string(cfg.trade_off) << '\n'
      << "J_a " << io::format_number(result.values[0]) << '\n'
      << "J_b " << io::format_number(result.values[1]) << '\n'
      << "feasible " << (result.feasible ? 1 : 0) << '\n';
  return result.feasible ? kSuccess : kNegative;
}

int cmd_optimize(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  OptimizerConfig opt = cfg.optimizer;
  opt.master_seed = resolve_seed(cfg, options);
  const auto dir = output_dir(cfg, options);
  const auto test_problem = options.test_problem ? options.test_problem : cfg.test_problem;

  if (test_problem) {
    if (*test_problem != "schaffer") throw ConfigError("unknown test problem '" + *test_problem + "'");
    if (!cfg.has("optimizer.gene_bounds")) opt.gene_bounds = {Bounds{-10.0, 10.0}};
    const auto archive = evolve(schaffer_problem(), opt);
    write_file(dir / "front.csv", [&](std::ostream& f) {
      f << "x1,J_a,J_b,feasible\n";
      for (const auto& m : archive.members) {
        f << io::format_number(m.genes[0]) << ',' << io::format_number(m.objectives.values[0]) << ','
          << io::format_number(m.objectives.values[1]) << ",1\n";
      }
    });
    const double gd = generational_distance(archive.members, schaffer_front_distance);
    out << "schaffer front: " << archive.members.size() << " members, generational distance "
        << short_number(gd) << '\n'
        << "wrote " << (dir / "front.csv").string() << '\n';
    return kSuccess;
  }

  const PlantSpec& spec = cfg.require_plant();
  SynthesisSetup setup{spec.discrete, cfg.max_drop, cfg.trade_off, cfg.eval, cfg.certify};
  CertificationCache cache;
  const auto archive = evolve(controller_problem(setup, opt.master_seed, cache), opt);

  const auto& plant = spec.discrete;
  write_file(dir / "front.csv", [&](std::ostream& f) {
    io::write_front_csv(f, archive, cfg.max_drop, plant.inputs(), plant.order());
  });
  io::FrontProvenance prov{spec.label, std::string(to_string(cfg.trade_off)), cfg.max_drop,
                           opt.master_seed, opt.population, opt.generations, cfg.eval.mc_runs,
                           cfg.eval.p_drop, cfg.eval.horizon};
  write_file(dir / "front.json", [&](std::ostream& f) { io::write_front_json(f, archive, prov); });

  const auto reps = representatives(archive);
  const auto seed = monte_carlo_seeds(opt.master_seed, kTrajectoryStream, 1).front();
  const auto trace = generate_drop_trace(cfg.eval.steps(plant.ts), cfg.eval.p_drop, cfg.max_drop, seed);
  const std::pair<const char*, std::size_t> picks[] = {
      {"min", reps.min}, {"median", reps.median}, {"max", reps.max}};
  for (const auto& [name, index] : picks) {
    const auto gains = GainSchedule::from_genes(archive.members[index].genes, cfg.max_drop,
                                                plant.inputs(), plant.order());
    const auto traj = simulate_closed_loop(plant, gains, trace);
    write_file(dir / (std::string("trajectory_") + name + ".csv"),
               [&](std::ostream& f) { io::write_trajectory_csv(f, traj); });
  }

  std::size_t feasible = 0;
  for (const auto& m : archive.members) feasible += m.objectives.feasible ? 1 : 0;
  out << "front: " << archive.members.size() << " members (" << feasible << " certified), "
      << cache.misses() << " certifications, " << cache.hits() << " cache hits\n"
      << "wrote " << (dir / "front.csv").string() << ", front.json, trajectory_{min,median,max}.csv\n";
  return feasible > 0 ? kSuccess : kNegative;
}

int ReproduceReport::schur_count() const {
  int c = 0;
  for (const auto& s : sets) c += s.schur ? 1 : 0;
  return c;
}

int ReproduceReport::certified_count() const {
  int c = 0;
  for (const auto& s : sets) c += s.certified ? 1 : 0;
  return c;
}

int ReproduceReport::ordering_count() const {
  int c = 0;
  for (const auto& o : orderings) c += o.holds() ? 1 : 0;
  return c;
}

bool ReproduceReport::passed() const {
  const int n = static_cast<int>(sets.size());
  return schur_count() == n && certified_count() >= n - 1 &&
         ordering_count() >= static_cast<int>(orderings.size()) - 1;
}

ReproduceReport reproduce(BuiltinPlant which, const EvalConfig& eval, const CertifyOptions& options,
                          std::uint64_t seed) {
  const DiscretePlant plant = builtin_plant(which);
  ReproduceReport report;
  report.plant = which;
  for (const auto& set : reference_gains(which)) {
    GainSetReport r;
    r.label = std::string(set.label);
    r.trade_off = set.trade_off;
    const auto gains = GainSchedule::from_genes(set.genes, 3, plant.inputs(), plant.order());
    const auto loop = build_switched(plant, gains);
    r.spectral_radii = spectral_radii(loop);
    r.schur = schur_precheck(loop);
    const auto start = std::chrono::steady_clock::now();
    const auto result = certify(loop, options);
    r.certify_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.certified = result.certified();
    r.iterations = result.iterations;
    const auto seeds = monte_carlo_seeds(seed, static_cast<std::uint64_t>(set.trade_off), eval.mc_runs);
    r.mean = evaluate(gains, plant, set.trade_off, eval, true, seeds);
    report.sets.push_back(std::move(r));
  }
  for (std::size_t t = 0; t + 2 < report.sets.size(); t += 3) {
    const auto& a = report.sets[t].mean.values;
    const auto& b = report.sets[t + 1].mean.values;
    const auto& c = report.sets[t + 2].mean.values;
    report.orderings.push_back(OrderingReport{report.sets[t].trade_off, a[0] < b[0] && b[0] < c[0],
                                              a[1] > b[1] && b[1] > c[1]});
  }
  return report;
}

int cmd_reproduce(const RunConfig& cfg, const CommandOptions& options, std::ostream& out) {
  BuiltinPlant which;
  if (options.plant) {
    which = parse_builtin_plant(*options.plant);
  } else if (cfg.plant && cfg.plant->builtin) {
    which = *cfg.plant->builtin;
  } else {
    throw ConfigError("reproduce needs a built-in plant name");
  }
  EvalConfig eval = cfg.eval;
  if (!cfg.has("eval.mc_runs")) eval.mc_runs = 200;
  const auto report = reproduce(which, eval, cfg.certify, resolve_seed(cfg, options));

  out << "plant " << to_string(which) << ", " << eval.mc_runs << " Monte-Carlo runs per set\n";
  for (const auto& s : report.sets) {
    out << s.label << " [" << to_string(s.trade_off) << "] rho";
    for (double r : s.spectral_radii) out << ' ' << short_number(r);
    out << " | schur " << (s.schur ? "pass" : "FAIL") << " | certify "
        << (s.certified ? "pass" : "FAIL") << " (" << s.iterations << " it) | mean J "
        << short_number(s.mean.values[0]) << ' ' << short_number(s.mean.values[1]) << '\n';
  }
  for (const auto& o : report.orderings) {
    out << "ordering " << to_string(o.trade_off) << ": J_a increasing "
        << (o.first_increasing ? "pass" : "FAIL") << ", J_b decreasing "
        << (o.second_decreasing ? "pass" : "FAIL") << '\n';
  }
  out << "summary: schur " << report.schur_count() << "/" << report.sets.size() << ", certified "
      << report.certified_count() << "/" << report.sets.size() << ", orderings "
      << report.ordering_count() << "/" << report.orderings.size() << " -> "
      << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? kSuccess : kNegative;
}

int run_command(std::string_view command, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const RunConfig cfg = options.config ? load_run_config(*options.config) : RunConfig{};
    if (command == "discretize") return cmd_discretize(cfg, options, out);
    if (command == "certify") return cmd_certify(cfg, options, out);
    if (command == "simulate") return cmd_simulate(cfg, options, out);
    if (command == "evaluate") return cmd_evaluate(cfg, options, out);
    if (command == "optimize") return cmd_optimize(cfg, options, out);
    if (command == "reproduce") return cmd_reproduce(cfg, options, out);
    err << "error: unknown command '" << command << "'\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "analysis failed: " << e.what() << '\n';
    return kNegative;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace ncsopt::cli
