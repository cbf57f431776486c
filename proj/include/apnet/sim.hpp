#pragma once

#include "apnet/analysis.hpp"
#include "apnet/common.hpp"
#include "apnet/graph.hpp"
#include "apnet/network.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace apnet {

struct Scenario {
  std::string name;
  Graph graph;
  Gains gains;
  SensingModel sensing;
  Vector x0;
  Vector xi0;
  double duration = 10.0;
  double dt = 1e-3;
  std::size_t record_stride = 1;

  /// Throws std::invalid_argument on a disconnected graph, bad gains,
  /// dimension mismatches, or a non-positive step.
  void validate() const;
  std::size_t steps() const;
  Horizon horizon() const { return {0.0, duration}; }
};

/// One record per sampled instant. `bound` holds the ultimate-bound expression
/// evaluated with the instantaneous signal magnitudes (NaN where it is not
/// defined); `epsilon_valid` is 0 where no weight was active and epsilon holds
/// its last valid value.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> x;
  std::vector<Vector> xi;
  std::vector<double> epsilon;
  std::vector<char> epsilon_valid;
  std::vector<double> delta_norm;
  std::vector<double> lyapunov;
  std::vector<double> bound;

  std::size_t size() const { return times.size(); }
};

struct IntegrateOptions {
  bool analysis = true;  // compute epsilon, delta, V and bound per sample
  std::optional<double> h_fd;  // defaults to dt / 10
  std::function<void(const NetworkState&)> on_step;  // called after every step, recorded or not
};

/// Classical fixed-step RK4 over the scenario horizon using the compact-form
/// derivative. Throws NumericalDivergence on a non-finite state.
Trajectory integrate(const Scenario& scenario, const IntegrateOptions& options = {});

/// One classical RK4 step of `f(state) -> StateDerivative`.
template <class Derivative>
NetworkState rk4_step(Derivative&& f, const NetworkState& s, double h) {
  auto shifted = [&](const StateDerivative& k, double scale, double dt) {
    return NetworkState{s.x + scale * k.x, s.xi + scale * k.xi, s.t + dt};
  };
  const StateDerivative k1 = f(s);
  const StateDerivative k2 = f(shifted(k1, h / 2, h / 2));
  const StateDerivative k3 = f(shifted(k2, h / 2, h / 2));
  const StateDerivative k4 = f(shifted(k3, h, h));
  return NetworkState{s.x + (h / 6) * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
                      s.xi + (h / 6) * (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi), s.t + h};
}

struct Convergence {
  bool converged = false;
  double first_time = 0.0;  // start of the final run of samples within tol; NaN if none
};

/// Converged iff max_i |x_i - target| <= tol at every sample in the last
/// `window` seconds.
Convergence convergence_check(const Trajectory& traj, double target, double tol, double window);

/// Max state discrepancy between runs at dt and dt/2, compared at the
/// instants recorded by the dt run.
double halve_step_audit(const Scenario& scenario);

struct ErrorDynamicsResidual {
  double delta = 0.0;     // max |finite-difference d(delta)/dt - closed-loop rhs|_inf
  double e = 0.0;         // same for e
  double lyapunov = 0.0;  // max |finite-difference dV/dt - lyapunov_rate|
  std::size_t samples = 0;
};

/// Checks the closed-loop error dynamics along a recorded trajectory: each
/// sample is advanced by +/- h_fd with RK4 to difference delta, e and V, and
/// compared with the decomposed closed-loop right-hand sides.
ErrorDynamicsResidual error_dynamics_audit(const Scenario& scenario, const Trajectory& traj,
                                           double h_fd);

/// Scenario samples on the integrator grid t_k = k * dt.
std::vector<double> step_times(const Scenario& scenario);

/// Ultimate-bound estimate for a scenario: suprema sampled on the integrator
/// grid, K1 decomposition over the same grid.
BoundEstimate scenario_bound(const Scenario& scenario, std::optional<double> h_fd = {});

}  // namespace apnet
