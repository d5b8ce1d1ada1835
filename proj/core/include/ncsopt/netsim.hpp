#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ncsopt/gain_schedule.hpp"
#include "ncsopt/plant.hpp"

namespace ncsopt {

/// Realized packet-loss sequence: delivered[k] is true when the packet sent at
/// instant k reached the actuator buffer within the same sampling step.
class DropTrace {
 public:
  /// Validates: delivered[0] is true and no run of drops reaches max_drop.
  DropTrace(std::vector<bool> delivered, int max_drop);

  std::size_t length() const { return delivered_.size(); }
  bool delivered(std::size_t k) const { return delivered_.at(k); }
  int max_drop() const { return max_drop_; }
  const std::vector<bool>& pattern() const { return delivered_; }

  /// Ascending instants of effective packets.
  std::vector<std::size_t> effective_times() const;
  /// Buffer read index rho(k) = k - i_m + 1 for every instant.
  std::vector<int> read_indices() const;
  double drop_fraction() const;

 private:
  std::vector<bool> delivered_;
  int max_drop_;
};

/// Bernoulli drops with probability p_drop; after max_drop - 1 consecutive
/// drops the next packet is forced through, and instant 0 is always delivered.
/// One uniform draw is consumed per instant k >= 1 regardless of forcing.
DropTrace generate_drop_trace(std::size_t length, double p_drop, int max_drop, std::uint64_t seed);

/// A control packet: slot q (0-based) holds u_{p,q+1} = K_{q+1} x(sent_at).
struct Packet {
  std::size_t sent_at = 0;
  std::vector<Vector> controls;
};

/// Actuator-side buffer: applies slot rho of the most recent effective packet.
class ActuatorBuffer {
 public:
  explicit ActuatorBuffer(int max_drop);

  /// Instant k with a fresh packet: slots replaced, rho = 1.
  const Vector& step(std::size_t k, Packet arrival);
  /// Instant k without arrival: rho advances; throws ProtocolViolation past max_drop.
  const Vector& step(std::size_t k);

  int max_drop() const { return max_drop_; }
  bool initialized() const { return initialized_; }
  int read_index() const { return read_index_; }
  std::size_t last_update() const { return last_update_; }
  /// Control applied at the latest step.
  const Vector& present() const;
  /// Predicted samples still unused after the latest step.
  std::span<const Vector> predicted() const;

 private:
  int max_drop_;
  bool initialized_ = false;
  std::size_t last_update_ = 0;
  int read_index_ = 1;
  std::vector<Vector> slots_;
};

/// Closed-loop record. states is n x (N+1), controls is m x N, modes has N
/// entries with modes[k] = rho(k).
struct Trajectory {
  Matrix states;
  Matrix controls;
  std::vector<int> modes;
  double ts = 0.0;

  std::size_t steps() const { return modes.size(); }
};

/// Buffer-form simulation: controller packets, actuator buffer, plant update.
Trajectory simulate_closed_loop(const DiscretePlant& plant, const GainSchedule& gains,
                                const DropTrace& trace);

/// Switched-form simulation: Gamma(k+1) = Phi_{sigma(k)} Gamma(k) with
/// Gamma(0) = [x0, 0, ..., 0].
Trajectory simulate_switched(const DiscretePlant& plant, const GainSchedule& gains,
                             const DropTrace& trace);

/// Stacked state [x(k), x(k-1), ..., x(k-M+1)] with zeros before k = 0.
Vector augmented_state(const Trajectory& traj, std::size_t k, int max_drop);

}  // namespace ncsopt
