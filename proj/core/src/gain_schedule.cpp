#include "ncsopt/gain_schedule.hpp"

#include <string>

#include "ncsopt/error.hpp"

namespace ncsopt {

GainSchedule::GainSchedule(std::vector<Matrix> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) throw ConfigError("GainSchedule: at least one gain (M_drop >= 1) required");
  for (const auto& k : gains_) {
    numerics::require_finite(k, "GainSchedule");
    if (k.rows() != gains_.front().rows() || k.cols() != gains_.front().cols()) {
      throw DimensionError("GainSchedule: all gains must share dimensions");
    }
  }
}

GainSchedule GainSchedule::from_genes(std::span<const double> genes, int max_drop,
                                      Eigen::Index inputs, Eigen::Index order) {
  if (max_drop < 1 || inputs < 1 || order < 1) {
    throw ConfigError("GainSchedule: M_drop, inputs and order must be >= 1");
  }
  const auto per = static_cast<std::size_t>(inputs * order);
  if (genes.size() != per * static_cast<std::size_t>(max_drop)) {
    throw DimensionError("GainSchedule: expected " + std::to_string(per * max_drop) +
                         " gains, got " + std::to_string(genes.size()));
  }
  std::vector<Matrix> gains;
  gains.reserve(static_cast<std::size_t>(max_drop));
  for (int q = 0; q < max_drop; ++q) {
    Matrix k(inputs, order);
    for (Eigen::Index r = 0; r < inputs; ++r)
      for (Eigen::Index c = 0; c < order; ++c)
        k(r, c) = genes[static_cast<std::size_t>(q) * per + static_cast<std::size_t>(r * order + c)];
    gains.push_back(std::move(k));
  }
  return GainSchedule(std::move(gains));
}

std::vector<double> GainSchedule::genes() const {
  std::vector<double> out;
  for (const auto& k : gains_)
    for (Eigen::Index r = 0; r < k.rows(); ++r)
      for (Eigen::Index c = 0; c < k.cols(); ++c) out.push_back(k(r, c));
  return out;
}

}  // namespace ncsopt
