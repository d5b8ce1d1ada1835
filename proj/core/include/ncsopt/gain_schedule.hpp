#pragma once

#include <span>
#include <vector>

#include "ncsopt/numerics.hpp"

namespace ncsopt {

/// Predictive feedback gains K_1..K_M (each m x n). Packet slot q carries K_q x.
class GainSchedule {
 public:
  GainSchedule() = default;
  explicit GainSchedule(std::vector<Matrix> gains);

  /// Row-major K_1..K_M from a flat genome of length M*m*n.
  static GainSchedule from_genes(std::span<const double> genes, int max_drop,
                                 Eigen::Index inputs, Eigen::Index order);

  int max_drop() const { return static_cast<int>(gains_.size()); }
  Eigen::Index inputs() const { return gains_.front().rows(); }
  Eigen::Index order() const { return gains_.front().cols(); }

  /// 1-based slot index, matching the packet layout.
  const Matrix& gain(int q) const { return gains_.at(static_cast<std::size_t>(q - 1)); }
  const std::vector<Matrix>& gains() const { return gains_; }

  std::vector<double> genes() const;

 private:
  std::vector<Matrix> gains_;
};

}  // namespace ncsopt
