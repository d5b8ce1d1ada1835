#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncsopt/moga.hpp"
#include "ncsopt/netsim.hpp"
#include "ncsopt/plant.hpp"
#include "ncsopt/stability.hpp"

namespace ncsopt::io {

/// Shortest text that round-trips the double exactly (%.17g).
std::string format_number(double v);

/// Header t,x1..xn,u1..um,sigma; one row per instant 0..N. The final row
/// (state only, no control applied yet) leaves u and sigma empty.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Gene column names: k{q}{l} for single-input plants, k{q}{r}{l} otherwise
/// (slot q, input r, state l; all 1-based).
std::vector<std::string> gene_names(int max_drop, Eigen::Index inputs, Eigen::Index order);

struct FrontRow {
  std::vector<double> genes;
  double j_a = 0.0;
  double j_b = 0.0;
  bool feasible = false;
};

void write_front_csv(std::ostream& out, const ParetoArchive& archive, int max_drop,
                     Eigen::Index inputs, Eigen::Index order);

/// Parses a front CSV written by write_front_csv. Throws ConfigError on a
/// malformed header or row.
std::vector<FrontRow> read_front_csv(std::istream& in);

struct FrontProvenance {
  std::string plant;
  std::string trade_off;
  int max_drop = 0;
  std::uint64_t master_seed = 0;
  int population = 0;
  int generations = 0;
  int mc_runs = 0;
  double p_drop = 0.0;
  double horizon = 0.0;
};

void write_front_json(std::ostream& out, const ParetoArchive& archive,
                      const FrontProvenance& provenance);

/// {"margin": eps, "P": [[[..]..], ...], "iterations": q}; P lists P_1..P_M.
void write_certificate_json(std::ostream& out, const LyapunovCertificate& cert);

/// {"F": [[..]], "G": [[..]], "Ts": ts}
void write_plant_json(std::ostream& out, const DiscretePlant& plant);

}  // namespace ncsopt::io
