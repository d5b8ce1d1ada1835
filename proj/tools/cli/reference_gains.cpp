#include "cli/reference_gains.hpp"

namespace ncsopt::cli {

namespace {

constexpr TradeOff k12 = TradeOff::J1J2;
constexpr TradeOff k32 = TradeOff::J3J2;
constexpr TradeOff k45 = TradeOff::J4J5;

constexpr std::array<ReferenceGainSet, 9> kDcMotor{{
    {"A1", k12, {-0.155, 0.003, -0.047, 0.036, -0.152, -0.040}},
    {"B1", k12, {-0.040, 0.021, -0.035, 0.010, -0.065, -0.042}},
    {"C1", k12, {-0.026, 0.013, -0.038, -0.001, -0.044, -0.045}},
    {"A2", k32, {-0.104, -0.015, -0.100, -0.012, -0.116, -0.039}},
    {"B2", k32, {-0.071, -0.009, -0.077, -0.021, -0.087, -0.049}},
    {"C2", k32, {-0.058, -0.007, -0.058, -0.035, -0.080, -0.048}},
    {"A3", k45, {-0.091, -0.009, -0.074, 0.022, -0.127, -0.051}},
    {"B3", k45, {-0.116, 0.026, -0.054, 0.075, -0.135, -0.012}},
    {"C3", k45, {-0.178, 0.029, -0.069, 0.075, -0.120, -0.012}},
}};

constexpr std::array<ReferenceGainSet, 9> kDoubleIntegrator{{
    {"A1", k12, {-1.534, -1.650, -1.179, -2.644, -3.497, -2.730}},
    {"B1", k12, {-0.994, -1.670, -0.658, -1.279, -1.374, -2.164}},
    {"C1", k12, {-0.253, -0.741, -0.439, -0.970, -0.139, -0.719}},
    {"A2", k32, {-2.660, -1.593, -0.814, -1.233, -2.401, -1.476}},
    {"B2", k32, {-1.678, -1.624, -0.917, -1.480, -1.540, -1.721}},
    {"C2", k32, {-0.309, -0.686, -0.417, -0.962, -0.161, -0.627}},
    {"A3", k45, {-0.949, -1.425, -0.598, -0.867, -0.707, -1.366}},
    {"B3", k45, {-1.086, -1.644, -0.355, -1.301, -2.343, -1.723}},
    {"C3", k45, {-1.784, -1.276, -1.127, -2.745, -3.318, -2.731}},
}};

constexpr std::array<ReferenceGainSet, 9> kInvertedPendulum{{
    {"A1", k12, {-2.486, -2.322, -2.068, -1.047, -1.847, -1.878}},
    {"B1", k12, {-2.370, -2.229, -1.468, -1.028, -1.929, -1.843}},
    {"C1", k12, {-2.010, -2.048, -1.288, -1.052, -1.797, -1.804}},
    {"A2", k32, {-3.115, -1.015, -1.914, -0.872, -2.749, -1.198}},
    {"B2", k32, {-2.644, -1.746, -1.927, -1.280, -2.201, -1.686}},
    {"C2", k32, {-1.976, -2.021, -1.911, -1.945, -1.928, -1.971}},
    {"A3", k45, {-2.982, -1.571, -2.511, -2.130, -1.859, -3.151}},
    {"B3", k45, {-2.906, -1.569, -2.492, -2.142, -1.883, -3.161}},
    {"C3", k45, {-3.005, -1.574, -2.552, -2.176, -1.867, -3.158}},
}};

}  // namespace

std::span<const ReferenceGainSet> reference_gains(BuiltinPlant plant) {
  switch (plant) {
    case BuiltinPlant::dc_motor:
      return kDcMotor;
    case BuiltinPlant::double_integrator:
      return kDoubleIntegrator;
    case BuiltinPlant::inverted_pendulum:
      return kInvertedPendulum;
  }
  return {};
}

}  // namespace ncsopt::cli
