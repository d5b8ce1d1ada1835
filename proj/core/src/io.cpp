#include "ncsopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ncsopt/error.hpp"

namespace ncsopt::io {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError("front CSV line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index n = traj.states.rows();
  const Eigen::Index m = traj.controls.rows();
  out << 't';
  for (Eigen::Index l = 1; l <= n; ++l) out << ",x" << l;
  for (Eigen::Index r = 1; r <= m; ++r) out << ",u" << r;
  out << ",sigma\n";
  const std::size_t steps = traj.steps();
  for (std::size_t k = 0; k <= steps; ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out << format_number(static_cast<double>(k) * traj.ts);
    for (Eigen::Index l = 0; l < n; ++l) out << ',' << format_number(traj.states(l, col));
    if (k < steps) {
      for (Eigen::Index r = 0; r < m; ++r) out << ',' << format_number(traj.controls(r, col));
      out << ',' << traj.modes[k] << '\n';
    } else {
      for (Eigen::Index r = 0; r < m; ++r) out << ',';
      out << ",\n";
    }
  }
}

std::vector<std::string> gene_names(int max_drop, Eigen::Index inputs, Eigen::Index order) {
  std::vector<std::string> names;
  for (int q = 1; q <= max_drop; ++q) {
    for (Eigen::Index r = 1; r <= inputs; ++r) {
      for (Eigen::Index l = 1; l <= order; ++l) {
        std::string name = "k" + std::to_string(q);
        if (inputs > 1) name += std::to_string(r);
        names.push_back(name + std::to_string(l));
      }
    }
  }
  return names;
}

void write_front_csv(std::ostream& out, const ParetoArchive& archive, int max_drop,
                     Eigen::Index inputs, Eigen::Index order) {
  const auto names = gene_names(max_drop, inputs, order);
  for (const auto& name : names) out << name << ',';
  out << "J_a,J_b,feasible\n";
  for (const auto& ind : archive.members) {
    if (ind.genes.size() != names.size()) {
      throw DimensionError("write_front_csv: genome length does not match the gain layout");
    }
    for (double g : ind.genes) out << format_number(g) << ',';
    out << format_number(ind.objectives.values[0]) << ',' << format_number(ind.objectives.values[1])
        << ',' << (ind.objectives.feasible ? 1 : 0) << '\n';
  }
}

std::vector<FrontRow> read_front_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("front CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 4 || header[header.size() - 3] != "J_a" ||
      header[header.size() - 2] != "J_b" || header.back() != "feasible") {
    throw ConfigError("front CSV: header must end with J_a,J_b,feasible");
  }
  const std::size_t genes = header.size() - 3;
  std::vector<FrontRow> rows;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigError("front CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " fields");
    }
    FrontRow row;
    for (std::size_t i = 0; i < genes; ++i) row.genes.push_back(parse_double(cells[i], lineno));
    row.j_a = parse_double(cells[genes], lineno);
    row.j_b = parse_double(cells[genes + 1], lineno);
    if (cells.back() != "0" && cells.back() != "1") {
      throw ConfigError("front CSV line " + std::to_string(lineno) + ": feasible must be 0 or 1");
    }
    row.feasible = cells.back() == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_front_json(std::ostream& out, const ParetoArchive& archive,
                      const FrontProvenance& provenance) {
  ordered_json doc;
  doc["plant"] = provenance.plant;
  doc["trade_off"] = provenance.trade_off;
  doc["M_drop"] = provenance.max_drop;
  doc["master_seed"] = provenance.master_seed;
  doc["population"] = provenance.population;
  doc["generations"] = provenance.generations;
  doc["final_generation"] = archive.generation;
  doc["mc_runs"] = provenance.mc_runs;
  doc["p_drop"] = provenance.p_drop;
  doc["horizon"] = provenance.horizon;
  ordered_json members = ordered_json::array();
  for (const auto& ind : archive.members) {
    ordered_json m;
    m["genes"] = ind.genes;
    m["objectives"] = {ind.objectives.values[0], ind.objectives.values[1]};
    m["feasible"] = ind.objectives.feasible;
    m["rank"] = ind.rank;
    if (std::isinf(ind.crowding)) {
      m["crowding"] = "inf";
    } else {
      m["crowding"] = ind.crowding;
    }
    members.push_back(std::move(m));
  }
  doc["members"] = std::move(members);
  out << doc.dump(2) << '\n';
}

void write_certificate_json(std::ostream& out, const LyapunovCertificate& cert) {
  ordered_json doc;
  doc["margin"] = cert.margin;
  ordered_json ps = ordered_json::array();
  for (const auto& p : cert.p) ps.push_back(matrix_json(p));
  doc["P"] = std::move(ps);
  doc["iterations"] = cert.iterations;
  out << doc.dump(2) << '\n';
}

void write_plant_json(std::ostream& out, const DiscretePlant& plant) {
  ordered_json doc;
  doc["F"] = matrix_json(plant.f);
  doc["G"] = matrix_json(plant.g);
  doc["Ts"] = plant.ts;
  out << doc.dump(2) << '\n';
}

}  // namespace ncsopt::io
