#include <random>

#include <gtest/gtest.h>

#include "ncsopt/error.hpp"
#include "ncsopt/plant.hpp"

namespace {

using namespace ncsopt;

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Frozen from tests/oracles/frozen_values.py (scipy.linalg.expm of the
// augmented matrix).
TEST(ZohDiscretize, MatchesScipyOracle) {
  const auto dc = zoh_discretize(builtin_continuous(BuiltinPlant::dc_motor), 0.05);
  EXPECT_NEAR(dc.f(0, 0), 1.0002088509547336, 1e-12);
  EXPECT_NEAR(dc.f(0, 1), 0.004600591874559895, 1e-12);
  EXPECT_NEAR(dc.f(1, 0), 0.004600591874559891, 1e-12);
  EXPECT_NEAR(dc.f(1, 1), 4.0177425412339455e-05, 1e-12);
  EXPECT_NEAR(dc.g(0, 0), 0.3486766689268225, 1e-10);
  EXPECT_NEAR(dc.g(1, 0), 7.680688134577736, 1e-10);

  const auto ip = zoh_discretize(builtin_continuous(BuiltinPlant::inverted_pendulum), 0.05);
  EXPECT_NEAR(ip.f(0, 0), 1.001250260438369, 1e-13);
  EXPECT_NEAR(ip.f(0, 1), 0.050020835937655016, 1e-13);
  EXPECT_NEAR(ip.g(0, 0), 0.0012502604383690242, 1e-13);
  EXPECT_NEAR(ip.g(1, 0), 0.05002083593765501, 1e-13);

  const auto di = zoh_discretize(builtin_continuous(BuiltinPlant::double_integrator), 0.01);
  EXPECT_NEAR(di.g(0, 0), 5e-05, 1e-15);
  EXPECT_NEAR(di.g(1, 0), 0.01, 1e-15);
  EXPECT_EQ(di.x0.size(), 2);
  EXPECT_EQ(di.x0.norm(), 0.0);
}

TEST(ZohDiscretize, ReproducesPrintedMatricesWithinRounding) {
  for (auto which : {BuiltinPlant::dc_motor, BuiltinPlant::inverted_pendulum}) {
    const auto printed = builtin_plant(which);
    const auto exact = zoh_discretize(builtin_continuous(which), printed.ts);
    EXPECT_LT((exact.f - printed.f).cwiseAbs().maxCoeff(), 1e-3) << to_string(which);
    EXPECT_LT((exact.g - printed.g).cwiseAbs().maxCoeff(), 1e-3) << to_string(which);
  }
  // The printed double-integrator G(1,1) is 1e-4; the exact value is Ts^2/2.
  const auto printed = builtin_plant(BuiltinPlant::double_integrator);
  const auto exact = zoh_discretize(builtin_continuous(BuiltinPlant::double_integrator), 0.01);
  EXPECT_NEAR(printed.g(0, 0) - exact.g(0, 0), 5e-5, 1e-15);
}

TEST(ZohDiscretize, ZeroDynamicsGivesIdentityAndScaledInput) {
  Matrix b(2, 1);
  b << 0.7, -1.3;
  const auto d = zoh_discretize(ContinuousPlant{Matrix::Zero(2, 2), b}, 0.2);
  EXPECT_LT((d.f - Matrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((d.g - 0.2 * b).norm(), 1e-15);
}

TEST(ZohDiscretize, PendulumTransitionIsSymmetric) {
  const auto ip = zoh_discretize(builtin_continuous(BuiltinPlant::inverted_pendulum), 0.05);
  EXPECT_LT((ip.f - ip.f.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ZohDiscretize, RejectsBadInput) {
  Matrix b(2, 1);
  b << 0, 1;
  EXPECT_THROW(zoh_discretize(ContinuousPlant{Matrix::Zero(2, 3), b}, 0.1), DimensionError);
  EXPECT_THROW(zoh_discretize(ContinuousPlant{Matrix::Zero(3, 3), b}, 0.1), DimensionError);
  EXPECT_THROW(zoh_discretize(ContinuousPlant{Matrix::Zero(2, 2), b}, 0.0), Error);
  EXPECT_THROW(zoh_discretize(ContinuousPlant{Matrix::Zero(2, 2), b}, -1.0), Error);
}

TEST(BuiltinPlant, CarriesPrintedMatrices) {
  const auto dc = builtin_plant("dc_motor");
  EXPECT_EQ(dc.f, m2(1.0002, 0.0046, 0.0046, 0.0));
  EXPECT_EQ(dc.g(0, 0), 0.3487);
  EXPECT_EQ(dc.g(1, 0), 7.6807);
  EXPECT_EQ(dc.ts, 0.05);
  const auto di = builtin_plant("double_integrator");
  EXPECT_EQ(di.f, m2(1.0, 0.01, 0.0, 1.0));
  EXPECT_EQ(di.g(0, 0), 0.0001);
  EXPECT_EQ(di.g(1, 0), 0.01);
  EXPECT_EQ(di.ts, 0.01);
  const auto ip = builtin_plant("inverted_pendulum");
  EXPECT_EQ(ip.f, m2(1.0013, 0.05, 0.05, 1.0013));
  EXPECT_EQ(ip.g(0, 0), 0.0013);
  EXPECT_EQ(ip.g(1, 0), 0.05);
  for (const auto* name : {"dc_motor", "double_integrator", "inverted_pendulum"}) {
    const auto p = builtin_plant(name);
    EXPECT_EQ(p.x0(0), 3.0);
    EXPECT_EQ(p.x0(1), -2.0);
    EXPECT_EQ(to_string(parse_builtin_plant(name)), name);
  }
}

TEST(BuiltinPlant, UnknownNameIsLookupError) {
  EXPECT_THROW(builtin_plant("warp_drive"), LookupError);
}

TEST(DiscretePlant, ValidateCatchesInconsistentShapes) {
  DiscretePlant p = builtin_plant(BuiltinPlant::dc_motor);
  p.x0 = Vector::Zero(3);
  EXPECT_THROW(p.validate(), DimensionError);
  p = builtin_plant(BuiltinPlant::dc_motor);
  p.ts = 0.0;
  EXPECT_THROW(p.validate(), Error);
  p = builtin_plant(BuiltinPlant::dc_motor);
  p.g = Matrix::Zero(3, 1);
  EXPECT_THROW(p.validate(), DimensionError);
}

}  // namespace
