#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace apnet {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// ---- targets --------------------------------------------------------------

struct FixedPath {
  Point position;
};

/// Counter-clockwise circle: center + radius * (cos, sin)(2*pi*t/period + phase).
struct CirclePath {
  Point center;
  double radius = 1.0;
  double period = 1.0;
  double phase = 0.0;
};

using TargetPath = std::variant<FixedPath, CirclePath>;

struct ConstantQuantity {
  double value = 0.0;
};

/// The sensed quantity equals the target's current x-coordinate.
struct XCoordinateQuantity {};

using TargetQuantity = std::variant<ConstantQuantity, XCoordinateQuantity>;

struct Target {
  TargetPath path;
  TargetQuantity quantity;

  Point position(double t) const;
  double value(double t) const;
};

// ---- signals ---------------------------------------------------------------

struct Constant {
  double value = 0.0;
};

/// offset + amplitude * sin(frequency * t + phase), frequency in rad/s.
struct Sinusoid {
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0;
  double offset = 0.0;
};

struct Breakpoint {
  double t;
  double value;
};

/// Linear interpolation between breakpoints; held constant outside them.
/// Breakpoint times must be strictly increasing.
struct PiecewiseLinear {
  std::vector<Breakpoint> points;
};

/// Linear accuracy falloff with sensor-target distance:
/// clamp(1 - d / range, 0, 1).
struct AccuracyFalloff {
  Point sensor;
  double range = 1.0;
};

/// Measurement of a target: accuracy * falloff(d) * q(t).
struct TargetTrack {
  int target = 0;
  double accuracy = 1.0;
  std::optional<AccuracyFalloff> falloff;
};

/// Value of information decaying with distance: clamp(1 - d / radius, 0, 1).
struct DistanceBased {
  double radius = 1.0;
  Point sensor;
  int target = 0;
};

using InputSignal = std::variant<Constant, Sinusoid, PiecewiseLinear, TargetTrack>;
using WeightSignal = std::variant<Constant, PiecewiseLinear, DistanceBased>;

double evaluate(const PiecewiseLinear& p, double t);
double evaluate(const InputSignal& s, double t, std::span<const Target> targets = {});
double evaluate(const WeightSignal& s, double t, std::span<const Target> targets = {});

/// Throw std::invalid_argument when a signal's parameters are malformed
/// (non-increasing breakpoints, weights outside [0,1], unknown target, ...).
void validate(const InputSignal& s, std::size_t target_count);
void validate(const WeightSignal& s, std::size_t target_count);

}  // namespace apnet
