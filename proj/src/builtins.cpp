#include "apnet/scenario_io.hpp"

#include <array>

namespace apnet {

namespace {

// Four agents on the line 1-2-3-4; agents 1 and 2 each sense both targets.
// Measurements follow accuracy * q with q_T1 = 1, q_T2 = 2, giving
// c = (1, 1, 0.5, 2).
Scenario two_target_line(const std::string& name, std::array<double, 4> weights) {
  std::vector<Target> targets{
      Target{FixedPath{{0.0, 0.0}}, ConstantQuantity{1.0}},
      Target{FixedPath{{3.0, 0.0}}, ConstantQuantity{2.0}},
  };
  std::vector<InputSignal> inputs{
      TargetTrack{0, 1.0, std::nullopt},  // agent 1, target 1, perfect
      TargetTrack{1, 0.5, std::nullopt},  // agent 1, target 2, 50%
      TargetTrack{0, 0.5, std::nullopt},  // agent 2, target 1, 50%
      TargetTrack{1, 1.0, std::nullopt},  // agent 2, target 2, perfect
  };
  std::vector<WeightEntry> entries{
      {0, 0, Constant{weights[0]}},
      {0, 1, Constant{weights[1]}},
      {1, 2, Constant{weights[2]}},
      {1, 3, Constant{weights[3]}},
  };
  return Scenario{
      .name = name,
      .graph = path_graph(4),
      .gains = {5.0, 10.0, 0.0},
      .sensing = {std::move(targets), std::move(inputs), WeightConfig(4, 4, std::move(entries))},
      .x0 = Vector::Zero(4),
      .xi0 = Vector::Zero(4),
      .duration = 10.0,
      .dt = 1e-3,
      .record_stride = 10,
  };
}

// Nine agents on a 3x3 grid over [0,3]^2 (4-neighbor links) tracking one
// target on a radius-1 circle about the center with a 20 s period. The sensed
// quantity is the target's x-coordinate; measurement accuracy falls off
// linearly with distance over kAccuracyRange.
constexpr double kSensingRadius = 1.2;
constexpr double kAccuracyRange = 4.0;

Scenario moving_target(const std::string& name, bool heterogeneous) {
  std::vector<Target> targets{Target{CirclePath{{1.5, 1.5}, 1.0, 20.0, 0.0}, XCoordinateQuantity{}}};
  std::vector<InputSignal> inputs;
  std::vector<WeightEntry> entries;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      const int agent = row * 3 + col;
      const Point sensor{0.5 + col, 0.5 + row};
      inputs.push_back(TargetTrack{0, 1.0, AccuracyFalloff{sensor, kAccuracyRange}});
      WeightSignal w = Constant{1.0};
      if (heterogeneous) w = DistanceBased{kSensingRadius, sensor, 0};
      entries.push_back({agent, agent, w});
    }
  }
  return Scenario{
      .name = name,
      .graph = grid_graph(3, 3),
      .gains = {20.0, 150.0, 0.1},
      .sensing = {std::move(targets), std::move(inputs), WeightConfig(9, 9, std::move(entries))},
      .x0 = Vector::Zero(9),
      .xi0 = Vector::Zero(9),
      .duration = 40.0,
      .dt = 1e-3,
      .record_stride = 10,
  };
}

// Constant inputs and weights with sigma = 0. A single active agent senses two
// inputs, so K_c c vanishes and the bound reduces to its consensus term.
Scenario constant_regime() {
  std::vector<InputSignal> inputs{Constant{1.0}, Constant{3.0}};
  std::vector<WeightEntry> entries{{0, 0, Constant{0.7}}, {0, 1, Constant{0.4}}};
  Vector x0(5);
  x0 << 0.0, 1.0, 2.0, 3.0, 4.0;
  return Scenario{
      .name = "constant-signals",
      .graph = cycle_graph(5),
      .gains = {2.0, 4.0, 0.0},
      .sensing = {{}, std::move(inputs), WeightConfig(5, 2, std::move(entries))},
      .x0 = x0,
      .xi0 = Vector::Zero(5),
      .duration = 60.0,
      .dt = 1e-3,
      .record_stride = 10,
  };
}

// Smooth time-varying inputs for integrator-order audits.
Scenario smooth_sinusoid() {
  std::vector<InputSignal> inputs{Sinusoid{1.0, 1.0, 0.0, 0.5}, Sinusoid{0.5, 2.0, 0.3, -0.2}};
  std::vector<WeightEntry> entries{{0, 0, Constant{1.0}}, {2, 1, Constant{0.6}}};
  Vector x0(4);
  x0 << 1.0, -1.0, 0.5, 0.0;
  return Scenario{
      .name = "smooth-sinusoid",
      .graph = path_graph(4),
      .gains = {1.0, 2.0, 0.1},
      .sensing = {{}, std::move(inputs), WeightConfig(4, 2, std::move(entries))},
      .x0 = x0,
      .xi0 = Vector::Zero(4),
      .duration = 10.0,
      .dt = 0.02,
      .record_stride = 1,
  };
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"fig2-identical", "fig2-heterogeneous", "fig4-identical", "fig4-heterogeneous",
          "constant-signals",     "smooth-sinusoid"};
}

Scenario builtin_scenario(std::string_view name) {
  if (name == "fig2-identical") return two_target_line(std::string(name), {1.0, 1.0, 1.0, 1.0});
  if (name == "fig2-heterogeneous") return two_target_line(std::string(name), {1.0, 0.1, 0.1, 1.0});
  if (name == "fig4-identical") return moving_target(std::string(name), false);
  if (name == "fig4-heterogeneous") return moving_target(std::string(name), true);
  if (name == "constant-signals") return constant_regime();
  if (name == "smooth-sinusoid") return smooth_sinusoid();
  throw std::invalid_argument("unknown builtin scenario '" + std::string(name) + "'");
}

}  // namespace apnet
