#include "cli/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ncsopt/error.hpp"

namespace ncsopt::cli {

namespace {

using nlohmann::json;

std::string type_error(const std::string& key, const char* expected) {
  return "config: '" + key + "' must be " + expected;
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(type_error(key, "a number"));
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(type_error(key, "an integer"));
  return v.get<int>();
}

std::uint64_t get_u64(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(type_error(key, "a non-negative integer"));
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(type_error(key, "a string"));
  return v.get<std::string>();
}

Matrix get_matrix(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ConfigError(type_error(key, "a non-empty array of rows"));
  const auto rows = static_cast<Eigen::Index>(v.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.empty()) throw ConfigError(type_error(key, "an array of numeric rows"));
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("config: '" + key + "' has rows of different length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = get_number(row[static_cast<std::size_t>(j)], key);
  }
  return m;
}

Vector get_vector(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ConfigError(type_error(key, "a non-empty numeric array"));
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = get_number(v[i], key);
  return out;
}

void flatten_numbers(const json& v, const std::string& key, std::vector<double>& out) {
  if (v.is_array()) {
    for (const auto& item : v) flatten_numbers(item, key, out);
  } else {
    out.push_back(get_number(v, key));
  }
}

using Handler = std::function<void(const json&)>;

/// Dispatches each member of `obj` to its handler; any other key is an error.
void visit(const json& obj, const std::string& prefix, const std::map<std::string, Handler>& handlers,
           std::set<std::string>& given) {
  if (!obj.is_object()) {
    throw ConfigError(prefix.empty() ? "config: top level must be a JSON object"
                                     : type_error(prefix, "an object"));
  }
  for (const auto& [key, value] : obj.items()) {
    const std::string dotted = prefix.empty() ? key : prefix + "." + key;
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("config: unknown key '" + dotted + "'");
    given.insert(dotted);
    it->second(value);
  }
}

PlantSpec parse_plant(const json& v, std::set<std::string>& given) {
  PlantSpec spec;
  if (v.is_string()) {
    const auto which = parse_builtin_plant(v.get<std::string>());
    spec.label = std::string(to_string(which));
    spec.builtin = which;
    spec.discrete = builtin_plant(which);
    return spec;
  }
  std::optional<Matrix> a, b, f, g;
  std::optional<double> ts;
  std::optional<Vector> x0;
  visit(v, "plant",
        {{"A", [&](const json& x) { a = get_matrix(x, "plant.A"); }},
         {"B", [&](const json& x) { b = get_matrix(x, "plant.B"); }},
         {"F", [&](const json& x) { f = get_matrix(x, "plant.F"); }},
         {"G", [&](const json& x) { g = get_matrix(x, "plant.G"); }},
         {"Ts", [&](const json& x) { ts = get_number(x, "plant.Ts"); }},
         {"x0", [&](const json& x) { x0 = get_vector(x, "plant.x0"); }}},
        given);
  if (!ts) throw ConfigError("config: plant.Ts is required");
  const bool continuous = a || b;
  const bool discrete = f || g;
  if (continuous == discrete) {
    throw ConfigError("config: plant needs either {A, B} or {F, G}, not both");
  }
  if (continuous) {
    if (!a || !b) throw ConfigError("config: continuous plant needs both A and B");
    spec.label = "continuous";
    spec.continuous = ContinuousPlant{*a, *b};
    spec.continuous->validate();
    spec.discrete = zoh_discretize(*spec.continuous, *ts);
    if (x0) spec.discrete.x0 = *x0;
  } else {
    if (!f || !g || !x0) throw ConfigError("config: discrete plant needs F, G, Ts and x0");
    spec.label = "inline";
    spec.discrete = DiscretePlant{*f, *g, *ts, *x0};
  }
  try {
    spec.discrete.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: plant: ") + e.what());
  }
  return spec;
}

std::vector<Bounds> parse_bounds(const json& v) {
  const std::string key = "optimizer.gene_bounds";
  auto pair = [&](const json& p) {
    if (!p.is_array() || p.size() != 2) throw ConfigError(type_error(key, "[low, high] or a list of them"));
    return Bounds{get_number(p[0], key), get_number(p[1], key)};
  };
  if (v.is_array() && v.size() == 2 && v[0].is_number()) return {pair(v)};
  if (!v.is_array() || v.empty()) throw ConfigError(type_error(key, "[low, high] or a list of them"));
  std::vector<Bounds> out;
  for (const auto& p : v) out.push_back(pair(p));
  return out;
}

}  // namespace

const PlantSpec& RunConfig::require_plant() const {
  if (!plant) throw ConfigError("config: 'plant' is required for this command");
  return *plant;
}

const std::vector<double>& RunConfig::require_gains() const {
  if (!gains) throw ConfigError("config: 'gains' is required for this command");
  return *gains;
}

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  auto& given = cfg.given;
  auto& ev = cfg.eval;
  auto& op = cfg.optimizer;
  auto& ce = cfg.certify;
  visit(doc, "",
        {{"plant", [&](const json& v) { cfg.plant = parse_plant(v, given); }},
         {"M_drop", [&](const json& v) { cfg.max_drop = get_int(v, "M_drop"); }},
         {"trade_off",
          [&](const json& v) {
            try {
              cfg.trade_off = parse_trade_off(get_string(v, "trade_off"));
            } catch (const LookupError& e) {
              throw ConfigError(std::string("config: ") + e.what());
            }
          }},
         {"gains",
          [&](const json& v) {
            std::vector<double> flat;
            flatten_numbers(v, "gains", flat);
            cfg.gains = std::move(flat);
          }},
         {"eval",
          [&](const json& v) {
            visit(v, "eval",
                  {{"horizon", [&](const json& x) { ev.horizon = get_number(x, "eval.horizon"); }},
                   {"mc_runs", [&](const json& x) { ev.mc_runs = get_int(x, "eval.mc_runs"); }},
                   {"p_drop", [&](const json& x) { ev.p_drop = get_number(x, "eval.p_drop"); }},
                   {"settling_band",
                    [&](const json& x) { ev.settling_band = get_number(x, "eval.settling_band"); }},
                   {"settling_confirm",
                    [&](const json& x) { ev.settling_confirm = get_int(x, "eval.settling_confirm"); }},
                   {"ma_span", [&](const json& x) { ev.ma_span = get_int(x, "eval.ma_span"); }},
                   {"penalty", [&](const json& x) { ev.penalty = get_number(x, "eval.penalty"); }},
                   {"peak_epsilon",
                    [&](const json& x) { ev.peak_epsilon = get_number(x, "eval.peak_epsilon"); }}},
                  given);
          }},
         {"optimizer",
          [&](const json& v) {
            visit(v, "optimizer",
                  {{"population", [&](const json& x) { op.population = get_int(x, "optimizer.population"); }},
                   {"generations",
                    [&](const json& x) { op.generations = get_int(x, "optimizer.generations"); }},
                   {"crossover_fraction",
                    [&](const json& x) {
                      op.crossover_fraction = get_number(x, "optimizer.crossover_fraction");
                    }},
                   {"mutation_fraction",
                    [&](const json& x) {
                      op.mutation_fraction = get_number(x, "optimizer.mutation_fraction");
                    }},
                   {"pareto_fraction",
                    [&](const json& x) { op.pareto_fraction = get_number(x, "optimizer.pareto_fraction"); }},
                   {"gene_bounds", [&](const json& x) { op.gene_bounds = parse_bounds(x); }},
                   {"master_seed", [&](const json& x) { op.master_seed = get_u64(x, "optimizer.master_seed"); }},
                   {"threads", [&](const json& x) { op.threads = get_int(x, "optimizer.threads"); }}},
                  given);
          }},
         {"certify",
          [&](const json& v) {
            visit(v, "certify",
                  {{"margin", [&](const json& x) { ce.margin = get_number(x, "certify.margin"); }},
                   {"budget", [&](const json& x) { ce.budget = get_int(x, "certify.budget"); }},
                   {"upper_bound",
                    [&](const json& x) { ce.upper_bound = get_number(x, "certify.upper_bound"); }}},
                  given);
          }},
         {"test_problem",
          [&](const json& v) {
            const auto name = get_string(v, "test_problem");
            if (name != "schaffer") throw ConfigError("config: unknown test_problem '" + name + "'");
            cfg.test_problem = name;
          }},
         {"output_dir", [&](const json& v) { cfg.output_dir = get_string(v, "output_dir"); }}},
        given);

  if (cfg.max_drop < 1) throw ConfigError("config: M_drop must be >= 1");
  cfg.eval.validate();
  if (op.threads < 1) throw ConfigError("config: optimizer.threads must be >= 1");
  if (!(ce.margin > 0.0)) throw ConfigError("config: certify.margin must be > 0");
  if (ce.budget < 1) throw ConfigError("config: certify.budget must be >= 1");
  if (!(ce.upper_bound > 0.0)) throw ConfigError("config: certify.upper_bound must be > 0");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace ncsopt::cli
