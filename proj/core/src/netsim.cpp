#include "ncsopt/netsim.hpp"

#include <string>

#include "ncsopt/error.hpp"
#include "ncsopt/rng.hpp"
#include "ncsopt/stability.hpp"

namespace ncsopt {

namespace {

void check_compatible(const DiscretePlant& plant, const GainSchedule& gains,
                      const DropTrace& trace) {
  plant.validate();
  if (gains.max_drop() != trace.max_drop()) {
    throw ConfigError("simulate: gain schedule M_drop (" + std::to_string(gains.max_drop()) +
                      ") differs from trace M_drop (" + std::to_string(trace.max_drop()) + ")");
  }
  if (gains.order() != plant.order() || gains.inputs() != plant.inputs()) {
    throw ConfigError("simulate: gain dimensions do not match the plant");
  }
}

}  // namespace

DropTrace::DropTrace(std::vector<bool> delivered, int max_drop)
    : delivered_(std::move(delivered)), max_drop_(max_drop) {
  if (max_drop_ < 1) throw ConfigError("DropTrace: M_drop must be >= 1");
  if (delivered_.empty()) throw ConfigError("DropTrace: length must be >= 1");
  if (!delivered_.front()) throw ConfigError("DropTrace: the first packet must be delivered");
  int run = 0;
  for (bool d : delivered_) {
    run = d ? 0 : run + 1;
    if (run >= max_drop_) {
      throw ConfigError("DropTrace: " + std::to_string(run) +
                        " consecutive drops exceed the M_drop bound");
    }
  }
}

std::vector<std::size_t> DropTrace::effective_times() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < delivered_.size(); ++k)
    if (delivered_[k]) out.push_back(k);
  return out;
}

std::vector<int> DropTrace::read_indices() const {
  std::vector<int> rho(delivered_.size());
  int current = 0;
  for (std::size_t k = 0; k < delivered_.size(); ++k) {
    current = delivered_[k] ? 1 : current + 1;
    rho[k] = current;
  }
  return rho;
}

double DropTrace::drop_fraction() const {
  std::size_t drops = 0;
  for (bool d : delivered_) drops += d ? 0 : 1;
  return static_cast<double>(drops) / static_cast<double>(delivered_.size());
}

DropTrace generate_drop_trace(std::size_t length, double p_drop, int max_drop, std::uint64_t seed) {
  if (!(p_drop >= 0.0 && p_drop < 1.0)) throw ConfigError("drop trace: p_drop must be in [0, 1)");
  if (max_drop < 1) throw ConfigError("drop trace: M_drop must be >= 1");
  if (length < 1) throw ConfigError("drop trace: length must be >= 1");
  Rng rng(seed);
  std::vector<bool> delivered(length, true);
  int run = 0;
  for (std::size_t k = 1; k < length; ++k) {
    const bool want_drop = rng.uniform() < p_drop;
    if (want_drop && run < max_drop - 1) {
      delivered[k] = false;
      ++run;
    } else {
      run = 0;
    }
  }
  return DropTrace(std::move(delivered), max_drop);
}

ActuatorBuffer::ActuatorBuffer(int max_drop) : max_drop_(max_drop) {
  if (max_drop_ < 1) throw ConfigError("ActuatorBuffer: M_drop must be >= 1");
}

const Vector& ActuatorBuffer::step(std::size_t k, Packet arrival) {
  if (arrival.controls.size() != static_cast<std::size_t>(max_drop_)) {
    throw ProtocolViolation("ActuatorBuffer: packet must carry exactly M_drop controls");
  }
  if (initialized_ && k <= last_update_) {
    throw ProtocolViolation("ActuatorBuffer: out-of-order packet");
  }
  slots_ = std::move(arrival.controls);
  last_update_ = k;
  read_index_ = 1;
  initialized_ = true;
  return present();
}

const Vector& ActuatorBuffer::step(std::size_t k) {
  if (!initialized_) throw ProtocolViolation("ActuatorBuffer: read before the first packet");
  if (k < last_update_) throw ProtocolViolation("ActuatorBuffer: time went backwards");
  const std::size_t rho = k - last_update_ + 1;
  if (rho > static_cast<std::size_t>(max_drop_)) {
    throw ProtocolViolation("ActuatorBuffer: read index " + std::to_string(rho) +
                            " exceeds M_drop " + std::to_string(max_drop_));
  }
  read_index_ = static_cast<int>(rho);
  return present();
}

const Vector& ActuatorBuffer::present() const {
  if (!initialized_) throw ProtocolViolation("ActuatorBuffer: empty");
  return slots_[static_cast<std::size_t>(read_index_ - 1)];
}

std::span<const Vector> ActuatorBuffer::predicted() const {
  if (!initialized_) return {};
  return std::span<const Vector>(slots_).subspan(static_cast<std::size_t>(read_index_));
}

Trajectory simulate_closed_loop(const DiscretePlant& plant, const GainSchedule& gains,
                                const DropTrace& trace) {
  check_compatible(plant, gains, trace);
  const std::size_t steps = trace.length();
  const Eigen::Index n = plant.order();
  const Eigen::Index m = plant.inputs();
  const int depth = gains.max_drop();

  Trajectory traj;
  traj.ts = plant.ts;
  traj.states.resize(n, static_cast<Eigen::Index>(steps) + 1);
  traj.controls.resize(m, static_cast<Eigen::Index>(steps));
  traj.modes.resize(steps);

  ActuatorBuffer buffer(depth);
  Vector x = plant.x0;
  traj.states.col(0) = x;
  for (std::size_t k = 0; k < steps; ++k) {
    const Vector* u = nullptr;
    if (trace.delivered(k)) {
      Packet packet{k, {}};
      packet.controls.reserve(static_cast<std::size_t>(depth));
      for (int q = 1; q <= depth; ++q) packet.controls.push_back(gains.gain(q) * x);
      u = &buffer.step(k, std::move(packet));
    } else {
      u = &buffer.step(k);
    }
    const auto col = static_cast<Eigen::Index>(k);
    traj.controls.col(col) = *u;
    traj.modes[k] = buffer.read_index();
    x = plant.f * x + plant.g * (*u);
    traj.states.col(col + 1) = x;
  }
  return traj;
}

Trajectory simulate_switched(const DiscretePlant& plant, const GainSchedule& gains,
                             const DropTrace& trace) {
  check_compatible(plant, gains, trace);
  const SwitchedClosedLoop loop = build_switched(plant, gains);
  const std::size_t steps = trace.length();
  const Eigen::Index n = plant.order();
  const int depth = gains.max_drop();

  Trajectory traj;
  traj.ts = plant.ts;
  traj.states.resize(n, static_cast<Eigen::Index>(steps) + 1);
  traj.controls.resize(plant.inputs(), static_cast<Eigen::Index>(steps));
  traj.modes = trace.read_indices();

  Vector gamma = Vector::Zero(n * depth);
  gamma.head(n) = plant.x0;
  traj.states.col(0) = plant.x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const int sigma = traj.modes[k];
    const auto col = static_cast<Eigen::Index>(k);
    traj.controls.col(col) = gains.gain(sigma) * gamma.segment((sigma - 1) * n, n);
    gamma = loop.phis[static_cast<std::size_t>(sigma - 1)] * gamma;
    traj.states.col(col + 1) = gamma.head(n);
  }
  return traj;
}

Vector augmented_state(const Trajectory& traj, std::size_t k, int max_drop) {
  const Eigen::Index n = traj.states.rows();
  Vector gamma = Vector::Zero(n * max_drop);
  for (int b = 0; b < max_drop; ++b) {
    if (k >= static_cast<std::size_t>(b)) {
      gamma.segment(b * n, n) = traj.states.col(static_cast<Eigen::Index>(k) - b);
    }
  }
  return gamma;
}

}  // namespace ncsopt
