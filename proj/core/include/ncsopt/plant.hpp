#pragma once

#include <string_view>

#include "ncsopt/numerics.hpp"

namespace ncsopt {

/// dx/dt = A x + B u
struct ContinuousPlant {
  Matrix a;  // n x n
  Matrix b;  // n x m

  Eigen::Index order() const { return a.rows(); }
  Eigen::Index inputs() const { return b.cols(); }
  /// Throws DimensionError / DomainError when the invariants do not hold.
  void validate() const;
};

/// x(k+1) = F x(k) + G u(k), sampled every `ts` seconds from `x0`.
struct DiscretePlant {
  Matrix f;  // n x n
  Matrix g;  // n x m
  double ts = 0.0;
  Vector x0;  // n

  Eigen::Index order() const { return f.rows(); }
  Eigen::Index inputs() const { return g.cols(); }
  void validate() const;
};

/// Zero-order-hold discretization through the augmented exponential
/// exp([[A, B], [0, 0]] ts). The returned x0 is zero.
DiscretePlant zoh_discretize(const ContinuousPlant& plant, double ts);

enum class BuiltinPlant { dc_motor, double_integrator, inverted_pendulum };

/// Printed discrete-time benchmark matrices, verbatim, with x0 = [3, -2].
DiscretePlant builtin_plant(BuiltinPlant which);
/// Name lookup ("dc_motor", "double_integrator", "inverted_pendulum"); throws LookupError.
DiscretePlant builtin_plant(std::string_view name);

/// Continuous-time models behind the built-ins, for cross-checking the discretizer.
ContinuousPlant builtin_continuous(BuiltinPlant which);

BuiltinPlant parse_builtin_plant(std::string_view name);
std::string_view to_string(BuiltinPlant which);

}  // namespace ncsopt
