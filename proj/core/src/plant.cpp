#include "ncsopt/plant.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ncsopt/error.hpp"

namespace ncsopt {

namespace {

Matrix rows2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix col2(double a, double b) {
  Matrix m(2, 1);
  m << a, b;
  return m;
}

Vector default_x0() {
  Vector x(2);
  x << 3.0, -2.0;
  return x;
}

constexpr std::array<std::string_view, 3> kNames = {"dc_motor", "double_integrator",
                                                     "inverted_pendulum"};

}  // namespace

void ContinuousPlant::validate() const {
  numerics::require_finite(a, "ContinuousPlant.A");
  numerics::require_finite(b, "ContinuousPlant.B");
  if (a.rows() != a.cols()) throw DimensionError("ContinuousPlant: A must be square");
  if (b.rows() != a.rows()) throw DimensionError("ContinuousPlant: B rows must equal A size");
}

void DiscretePlant::validate() const {
  numerics::require_finite(f, "DiscretePlant.F");
  numerics::require_finite(g, "DiscretePlant.G");
  if (f.rows() != f.cols()) throw DimensionError("DiscretePlant: F must be square");
  if (g.rows() != f.rows()) throw DimensionError("DiscretePlant: G rows must equal F size");
  if (x0.size() != f.rows()) throw DimensionError("DiscretePlant: x0 length must equal F size");
  if (!x0.allFinite()) throw DomainError("DiscretePlant: non-finite x0");
  if (!(ts > 0.0) || !std::isfinite(ts)) throw DomainError("DiscretePlant: Ts must be > 0");
}

DiscretePlant zoh_discretize(const ContinuousPlant& plant, double ts) {
  plant.validate();
  if (!(ts > 0.0) || !std::isfinite(ts)) throw DomainError("zoh_discretize: Ts must be > 0");
  const Eigen::Index n = plant.order();
  const Eigen::Index m = plant.inputs();
  Matrix aug = Matrix::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = plant.a;
  aug.topRightCorner(n, m) = plant.b;
  const Matrix e = numerics::mat_exp(aug, ts);
  DiscretePlant out;
  out.f = e.topLeftCorner(n, n);
  out.g = e.topRightCorner(n, m);
  out.ts = ts;
  out.x0 = Vector::Zero(n);
  return out;
}

DiscretePlant builtin_plant(BuiltinPlant which) {
  DiscretePlant p;
  switch (which) {
    case BuiltinPlant::dc_motor:
      p.f = rows2(1.0002, 0.0046, 0.0046, 0.0);
      p.g = col2(0.3487, 7.6807);
      p.ts = 0.05;
      break;
    case BuiltinPlant::double_integrator:
      // G(1) is the printed 0.0001; exact ZOH gives Ts^2/2 = 0.00005.
      p.f = rows2(1.0, 0.01, 0.0, 1.0);
      p.g = col2(0.0001, 0.01);
      p.ts = 0.01;
      break;
    case BuiltinPlant::inverted_pendulum:
      p.f = rows2(1.0013, 0.05, 0.05, 1.0013);
      p.g = col2(0.0013, 0.05);
      p.ts = 0.05;
      break;
  }
  p.x0 = default_x0();
  return p;
}

DiscretePlant builtin_plant(std::string_view name) { return builtin_plant(parse_builtin_plant(name)); }

ContinuousPlant builtin_continuous(BuiltinPlant which) {
  switch (which) {
    case BuiltinPlant::dc_motor:
      return {rows2(0.0, 1.0, 1.0, -217.4), col2(0.0, 1669.5)};
    case BuiltinPlant::double_integrator:
      return {rows2(0.0, 1.0, 0.0, 0.0), col2(0.0, 1.0)};
    case BuiltinPlant::inverted_pendulum:
      return {rows2(0.0, 1.0, 1.0, 0.0), col2(0.0, 1.0)};
  }
  throw LookupError("unknown built-in plant");
}

BuiltinPlant parse_builtin_plant(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<BuiltinPlant>(i);
  }
  throw LookupError("unknown built-in plant '" + std::string(name) +
                    "' (expected dc_motor, double_integrator or inverted_pendulum)");
}

std::string_view to_string(BuiltinPlant which) { return kNames[static_cast<std::size_t>(which)]; }

}  // namespace ncsopt
