#pragma once

#include <array>
#include <span>
#include <string_view>

#include "ncsopt/objectives.hpp"
#include "ncsopt/plant.hpp"

namespace ncsopt::cli {

/// One reference gain set: label (A1..C3), the trade-off it was tuned for and
/// K11 K12 K21 K22 K31 K32 as printed (M_drop = 3, single input, n = 2).
struct ReferenceGainSet {
  std::string_view label;
  TradeOff trade_off;
  std::array<double, 6> genes;
};

/// The nine solutions reported for a built-in plant, ordered A1 B1 C1 A2 .. C3.
/// Within each trade-off the first objective increases and the second
/// decreases from A to C.
std::span<const ReferenceGainSet> reference_gains(BuiltinPlant plant);

}  // namespace ncsopt::cli
