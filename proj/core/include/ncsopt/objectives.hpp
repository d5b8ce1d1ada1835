#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ncsopt/gain_schedule.hpp"
#include "ncsopt/netsim.hpp"
#include "ncsopt/plant.hpp"

namespace ncsopt {

/// Which pair of costs the optimizer trades off.
enum class TradeOff { J1J2, J3J2, J4J5 };

TradeOff parse_trade_off(std::string_view name);
std::string_view to_string(TradeOff t);

/// Ordered objective pair (minimization) and LMI feasibility flag.
/// `violation` ranks infeasible vectors against each other during selection
/// (smaller is closer to feasible); it is 0 for feasible vectors.
struct ObjectiveVector {
  std::array<double, 2> values{0.0, 0.0};
  bool feasible = true;
  double violation = 0.0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct EvalConfig {
  double horizon = 20.0;         // seconds
  int mc_runs = 10;
  double p_drop = 0.8;
  double settling_band = 0.02;   // absolute
  int settling_confirm = 10;     // samples
  int ma_span = 5;
  double penalty = 1e9;
  double peak_epsilon = 0.01;

  void validate() const;
  /// Number of sampling instants simulated for sampling period ts.
  std::size_t steps(double ts) const;
};

/// Time-weighted absolute state: sum_l sum_k (k ts) |x_l(k)|.
double j1_itae(const Trajectory& traj, double ts);

/// Control energy: sum_l sum_k u_l(k)^2.
double j2_energy(const Trajectory& traj);

/// Centered moving average whose window shrinks symmetrically at the edges.
/// Throws ConfigError for an even or non-positive span.
std::vector<double> moving_average(std::span<const double> series, int span);

/// Jitter: sum_l || x_l - moving_average(x_l) ||_2.
double j3_smoothness(const Trajectory& traj, int span);

/// Normalized peak: sum_l max_k |x_l(k)| / x~_l0, where |x~_l0| is floored at
/// peak_epsilon to avoid dividing by a zero initial state.
double j4_peak(const Trajectory& traj, const Vector& x0, double peak_epsilon);

/// Settling time summed over states. For each state, the first k whose
/// `confirm`-sample window [k, k+confirm-1] stays inside the band gives
/// k ts; a state that never confirms saturates at the horizon N ts.
double j5_settling(const Trajectory& traj, double ts, double band, int confirm);

/// The selected objective pair for one trajectory.
std::array<double, 2> objective_pair(const Trajectory& traj, const DiscretePlant& plant,
                                     TradeOff trade_off, const EvalConfig& cfg);

/// Monte-Carlo mean of the selected pair over one simulation per seed.
/// Infeasible schedules get (penalty, penalty) without simulating.
ObjectiveVector evaluate(const GainSchedule& gains, const DiscretePlant& plant, TradeOff trade_off,
                         const EvalConfig& cfg, bool feasible,
                         std::span<const std::uint64_t> seeds);

/// Seeds shared by every evaluation within one stream (common random numbers).
std::vector<std::uint64_t> monte_carlo_seeds(std::uint64_t master, std::uint64_t stream,
                                             int count);

}  // namespace ncsopt
