#include "ncsopt/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncsopt/error.hpp"
#include "ncsopt/rng.hpp"

namespace ncsopt {

namespace {

constexpr std::array<std::string_view, 3> kTradeOffNames = {"J1J2", "J3J2", "J4J5"};

std::vector<double> row_of(const Matrix& m, Eigen::Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] = m(r, c);
  return out;
}

}  // namespace

TradeOff parse_trade_off(std::string_view name) {
  for (std::size_t i = 0; i < kTradeOffNames.size(); ++i) {
    if (kTradeOffNames[i] == name) return static_cast<TradeOff>(i);
  }
  throw LookupError("unknown trade-off '" + std::string(name) + "' (expected J1J2, J3J2 or J4J5)");
}

std::string_view to_string(TradeOff t) { return kTradeOffNames[static_cast<std::size_t>(t)]; }

void EvalConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("eval.horizon must be > 0");
  if (mc_runs < 1) throw ConfigError("eval.mc_runs must be >= 1");
  if (!(p_drop >= 0.0 && p_drop < 1.0)) throw ConfigError("eval.p_drop must be in [0, 1)");
  if (!(settling_band > 0.0)) throw ConfigError("eval.settling_band must be > 0");
  if (settling_confirm < 1) throw ConfigError("eval.settling_confirm must be >= 1");
  if (ma_span < 3 || ma_span % 2 == 0) throw ConfigError("eval.ma_span must be odd and >= 3");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw ConfigError("eval.penalty must be > 0");
  if (!(peak_epsilon > 0.0)) throw ConfigError("eval.peak_epsilon must be > 0");
}

std::size_t EvalConfig::steps(double ts) const {
  const double n = std::round(horizon / ts);
  return static_cast<std::size_t>(std::max(1.0, n));
}

double j1_itae(const Trajectory& traj, double ts) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < traj.states.cols(); ++k) {
    total += static_cast<double>(k) * ts * traj.states.col(k).cwiseAbs().sum();
  }
  return total;
}

double j2_energy(const Trajectory& traj) { return traj.controls.squaredNorm(); }

std::vector<double> moving_average(std::span<const double> series, int span) {
  if (span < 1 || span % 2 == 0) throw ConfigError("moving_average: span must be odd");
  if (series.empty()) throw ConfigError("moving_average: empty series");
  const std::size_t len = series.size();
  const std::size_t half = static_cast<std::size_t>(span - 1) / 2;
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t w = std::min({i, len - 1 - i, half});
    // Mean deviation from the centre sample, so constant windows stay exact.
    double dev = 0.0;
    for (std::size_t j = i - w; j <= i + w; ++j) dev += series[j] - series[i];
    out[i] = series[i] + dev / static_cast<double>(2 * w + 1);
  }
  return out;
}

double j3_smoothness(const Trajectory& traj, int span) {
  double total = 0.0;
  for (Eigen::Index l = 0; l < traj.states.rows(); ++l) {
    const std::vector<double> raw = row_of(traj.states, l);
    const std::vector<double> smooth = moving_average(raw, span);
    double sq = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) sq += (raw[k] - smooth[k]) * (raw[k] - smooth[k]);
    total += std::sqrt(sq);
  }
  return total;
}

double j4_peak(const Trajectory& traj, const Vector& x0, double peak_epsilon) {
  if (x0.size() != traj.states.rows()) throw DimensionError("j4_peak: x0 length mismatch");
  double total = 0.0;
  for (Eigen::Index l = 0; l < traj.states.rows(); ++l) {
    const double peak = traj.states.row(l).cwiseAbs().maxCoeff();
    const double ref = std::abs(x0(l)) > peak_epsilon ? x0(l) : peak_epsilon;
    total += std::abs(peak / ref);
  }
  return total;
}

double j5_settling(const Trajectory& traj, double ts, double band, int confirm) {
  const Eigen::Index samples = traj.states.cols();
  const double horizon = static_cast<double>(samples - 1) * ts;
  const Eigen::Index window = confirm;
  double total = 0.0;
  for (Eigen::Index l = 0; l < traj.states.rows(); ++l) {
    double settle = horizon;
    // Sliding count of in-band samples over [k, k + window - 1].
    for (Eigen::Index k = 0, run = 0; k < samples; ++k) {
      run = std::abs(traj.states(l, k)) < band ? run + 1 : 0;
      if (run >= window) {
        settle = static_cast<double>(k - window + 1) * ts;
        break;
      }
    }
    total += settle;
  }
  return total;
}

std::array<double, 2> objective_pair(const Trajectory& traj, const DiscretePlant& plant,
                                     TradeOff trade_off, const EvalConfig& cfg) {
  switch (trade_off) {
    case TradeOff::J1J2:
      return {j1_itae(traj, plant.ts), j2_energy(traj)};
    case TradeOff::J3J2:
      return {j3_smoothness(traj, cfg.ma_span), j2_energy(traj)};
    case TradeOff::J4J5:
      return {j4_peak(traj, plant.x0, cfg.peak_epsilon),
              j5_settling(traj, plant.ts, cfg.settling_band, cfg.settling_confirm)};
  }
  throw LookupError("objective_pair: unknown trade-off");
}

ObjectiveVector evaluate(const GainSchedule& gains, const DiscretePlant& plant, TradeOff trade_off,
                         const EvalConfig& cfg, bool feasible,
                         std::span<const std::uint64_t> seeds) {
  cfg.validate();
  if (!feasible) return {{cfg.penalty, cfg.penalty}, false};
  if (seeds.empty()) throw ConfigError("evaluate: at least one seed required");

  const std::size_t steps = cfg.steps(plant.ts);
  std::array<double, 2> sum{0.0, 0.0};
  for (const std::uint64_t seed : seeds) {
    const DropTrace trace = generate_drop_trace(steps, cfg.p_drop, gains.max_drop(), seed);
    const Trajectory traj = simulate_closed_loop(plant, gains, trace);
    const auto pair = objective_pair(traj, plant, trade_off, cfg);
    sum[0] += pair[0];
    sum[1] += pair[1];
  }
  const double runs = static_cast<double>(seeds.size());
  ObjectiveVector out{{sum[0] / runs, sum[1] / runs}, true};
  if (!std::isfinite(out.values[0]) || !std::isfinite(out.values[1])) {
    return {{cfg.penalty, cfg.penalty}, false};
  }
  return out;
}

std::vector<std::uint64_t> monte_carlo_seeds(std::uint64_t master, std::uint64_t stream,
                                             int count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int r = 0; r < count; ++r) seeds.push_back(derive_seed(master, stream, static_cast<std::uint64_t>(r)));
  return seeds;
}

}  // namespace ncsopt
