#include "apnet/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace apnet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

const Target& lookup(std::span<const Target> targets, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= targets.size()) {
    throw std::out_of_range("signal references unknown target " + std::to_string(index));
  }
  return targets[index];
}

void check_breakpoints(const PiecewiseLinear& p) {
  if (p.points.empty()) throw std::invalid_argument("piecewise-linear signal needs breakpoints");
  for (std::size_t k = 1; k < p.points.size(); ++k) {
    if (!(p.points[k].t > p.points[k - 1].t)) {
      throw std::invalid_argument("piecewise-linear breakpoint times must be strictly increasing");
    }
  }
}

void check_target(int index, std::size_t count) {
  if (index < 0 || static_cast<std::size_t>(index) >= count) {
    throw std::invalid_argument("unknown target " + std::to_string(index));
  }
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(v));
  }
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point Target::position(double t) const {
  return std::visit(overloaded{
                        [](const FixedPath& f) { return f.position; },
                        [t](const CirclePath& c) {
                          const double angle = 2.0 * std::numbers::pi * t / c.period + c.phase;
                          return Point{c.center.x + c.radius * std::cos(angle),
                                       c.center.y + c.radius * std::sin(angle)};
                        },
                    },
                    path);
}

double Target::value(double t) const {
  return std::visit(overloaded{
                        [](const ConstantQuantity& q) { return q.value; },
                        [this, t](const XCoordinateQuantity&) { return position(t).x; },
                    },
                    quantity);
}

double evaluate(const PiecewiseLinear& p, double t) {
  const auto& pts = p.points;
  if (t <= pts.front().t) return pts.front().value;
  if (t >= pts.back().t) return pts.back().value;
  auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                             [](double tt, const Breakpoint& b) { return tt < b.t; });
  auto lo = hi - 1;
  const double s = (t - lo->t) / (hi->t - lo->t);
  return lo->value + s * (hi->value - lo->value);
}

double evaluate(const InputSignal& s, double t, std::span<const Target> targets) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [t](const Sinusoid& w) { return w.offset + w.amplitude * std::sin(w.frequency * t + w.phase); },
          [t](const PiecewiseLinear& p) { return evaluate(p, t); },
          [t, targets](const TargetTrack& m) {
            const Target& target = lookup(targets, m.target);
            double accuracy = m.accuracy;
            if (m.falloff) {
              accuracy *= clamp01(1.0 - distance(m.falloff->sensor, target.position(t)) / m.falloff->range);
            }
            return accuracy * target.value(t);
          },
      },
      s);
}

double evaluate(const WeightSignal& s, double t, std::span<const Target> targets) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [t](const PiecewiseLinear& p) { return clamp01(evaluate(p, t)); },
          [t, targets](const DistanceBased& d) {
            const Target& target = lookup(targets, d.target);
            return clamp01(1.0 - distance(d.sensor, target.position(t)) / d.radius);
          },
      },
      s);
}

void validate(const InputSignal& s, std::size_t target_count) {
  std::visit(overloaded{
                 [](const Constant&) {},
                 [](const Sinusoid&) {},
                 [](const PiecewiseLinear& p) { check_breakpoints(p); },
                 [target_count](const TargetTrack& m) {
                   check_target(m.target, target_count);
                   if (m.falloff && !(m.falloff->range > 0.0)) {
                     throw std::invalid_argument("accuracy falloff range must be positive");
                   }
                 },
             },
             s);
}

void validate(const WeightSignal& s, std::size_t target_count) {
  std::visit(overloaded{
                 [](const Constant& c) { check_unit(c.value, "weight"); },
                 [](const PiecewiseLinear& p) {
                   check_breakpoints(p);
                   for (const Breakpoint& b : p.points) check_unit(b.value, "weight breakpoint");
                 },
                 [target_count](const DistanceBased& d) {
                   check_target(d.target, target_count);
                   if (!(d.radius > 0.0)) throw std::invalid_argument("sensing radius must be positive");
                 },
             },
             s);
}

}  // namespace apnet
