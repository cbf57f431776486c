#include "apnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace apnet {

void Scenario::validate() const {
  gains.validate();
  sensing.validate();
  const std::size_t n = graph.size();
  if (!is_connected(graph)) throw std::invalid_argument("communication graph is not connected");
  if (sensing.agents() != n) {
    throw std::invalid_argument("weight configuration covers " + std::to_string(sensing.agents()) +
                                " agents, graph has " + std::to_string(n));
  }
  if (static_cast<std::size_t>(x0.size()) != n || static_cast<std::size_t>(xi0.size()) != n) {
    throw std::invalid_argument("initial conditions must have one entry per agent");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(duration >= dt)) throw std::invalid_argument("duration must be at least dt");
  if (record_stride == 0) throw std::invalid_argument("record_stride must be at least 1");
}

std::size_t Scenario::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

std::vector<double> step_times(const Scenario& scenario) {
  const std::size_t steps = scenario.steps();
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * scenario.dt;
  return times;
}

namespace {

// Signal values at one instant, cached so that RK4 stages sharing a time
// evaluate the exogenous model once.
struct SignalFrame {
  double t;
  Matrix k1;
  Matrix k2;
  Vector c;
};

SignalFrame frame_at(const SensingModel& model, double t) {
  SignalFrame f{t, Matrix(), model.k2(t), model.inputs_at(t)};
  f.k1 = f.k2.rowwise().sum().asDiagonal();
  return f;
}

class Recorder {
 public:
  Recorder(const Scenario& sc, const Matrix& L, bool analysis, double h_fd)
      : sc_(sc), L_(L), analysis_(analysis), h_fd_(h_fd) {
    if (!analysis_) return;
    l_pinv_ = laplacian_pseudoinverse(L_, sc_.graph);
    const std::vector<double> times = step_times(sc_);
    try {
      lambda_min_f_ = f_matrix_min_eig(L_, decompose_k1(sample_k1(sc_.sensing, times)).k0);
    } catch (const DecompositionInfeasible&) {
      lambda_min_f_.reset();
    }
  }

  void record(const NetworkState& s, const SignalFrame& f, Trajectory& out) {
    out.times.push_back(s.t);
    out.x.push_back(s.x);
    out.xi.push_back(s.xi);
    if (!analysis_) return;

    const double total = f.k2.sum();
    const bool valid = total >= kActiveSensingFloor;
    if (valid) {
      epsilon_ = (f.k2 * f.c).sum() / total;
      drive_ = sc_.gains.alpha * (l_pinv_ * (k_c(f.k1, f.k2) * f.c));
      have_valid_ = true;
    } else if (!have_valid_) {
      drive_ = Vector::Zero(s.x.size());
    }
    const Vector d = delta(s.x, epsilon_);
    const Vector e = s.xi - drive_;
    out.epsilon.push_back(epsilon_);
    out.epsilon_valid.push_back(valid ? 1 : 0);
    out.delta_norm.push_back(d.norm());
    out.lyapunov.push_back(lyapunov(d, e, sc_.gains));
    out.bound.push_back(valid ? pointwise_bound(s.t) : std::numeric_limits<double>::quiet_NaN());
  }

 private:
  double pointwise_bound(double t) const {
    if (!lambda_min_f_) return std::numeric_limits<double>::quiet_NaN();
    try {
      const Perturbations p = perturbations(sc_.sensing, sc_.gains, l_pinv_, t, h_fd_, sc_.horizon());
      return bound_expression(sc_.graph.size(), sc_.gains, *lambda_min_f_, std::abs(p.eps_dot), p.p1,
                              p.p2);
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

  const Scenario& sc_;
  const Matrix& L_;
  bool analysis_;
  double h_fd_;
  Matrix l_pinv_;
  std::optional<double> lambda_min_f_;
  double epsilon_ = 0.0;
  Vector drive_;
  bool have_valid_ = false;
};

}  // namespace

Trajectory integrate(const Scenario& sc, const IntegrateOptions& options) {
  sc.validate();
  const Matrix L = laplacian(sc.graph);
  const double h_fd = options.h_fd.value_or(sc.dt / 10.0);
  Recorder recorder(sc, L, options.analysis, h_fd);

  const std::size_t steps = sc.steps();
  Trajectory traj;
  const std::size_t expected = steps / sc.record_stride + 2;
  traj.times.reserve(expected);
  traj.x.reserve(expected);
  traj.xi.reserve(expected);

  NetworkState s{sc.x0, sc.xi0, 0.0};
  SignalFrame start = frame_at(sc.sensing, 0.0);
  recorder.record(s, start, traj);

  for (std::size_t k = 1; k <= steps; ++k) {
    const double t1 = static_cast<double>(k) * sc.dt;
    const SignalFrame mid = frame_at(sc.sensing, start.t + 0.5 * sc.dt);
    SignalFrame end = frame_at(sc.sensing, t1);
    auto f = [&](const NetworkState& st) {
      const SignalFrame& fr = st.t == start.t ? start : (st.t == mid.t ? mid : end);
      return derivative_compact_form(L, sc.gains, fr.k1, fr.k2, fr.c, st);
    };
    // Stage times are start.t, start.t + dt/2 (twice) and start.t + dt.
    NetworkState next = rk4_step(f, NetworkState{s.x, s.xi, start.t}, sc.dt);
    next.t = t1;
    if (!next.x.allFinite() || !next.xi.allFinite()) {
      throw NumericalDivergence(t1, "state became non-finite");
    }
    s = std::move(next);
    if (options.on_step) options.on_step(s);
    if (k % sc.record_stride == 0 || k == steps) recorder.record(s, end, traj);
    start = std::move(end);
  }
  return traj;
}

Convergence convergence_check(const Trajectory& traj, double target, double tol, double window) {
  if (traj.size() == 0) return {false, std::numeric_limits<double>::quiet_NaN()};
  const double t_end = traj.times.back();
  if (window > t_end - traj.times.front()) {
    throw std::invalid_argument("convergence window exceeds the trajectory duration");
  }
  auto within = [&](std::size_t k) {
    return (traj.x[k].array() - target).abs().maxCoeff() <= tol;
  };
  Convergence out;
  out.converged = true;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] >= t_end - window && !within(k)) out.converged = false;
  }
  std::size_t first = traj.size();
  for (std::size_t k = traj.size(); k-- > 0;) {
    if (!within(k)) break;
    first = k;
  }
  out.first_time = first < traj.size() ? traj.times[first] : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double halve_step_audit(const Scenario& scenario) {
  Scenario fine = scenario;
  fine.dt = scenario.dt / 2.0;
  fine.record_stride = scenario.record_stride * 2;
  IntegrateOptions states_only;
  states_only.analysis = false;
  const Trajectory coarse_run = integrate(scenario, states_only);
  const Trajectory fine_run = integrate(fine, states_only);
  double worst = 0.0;
  const std::size_t count = std::min(coarse_run.size(), fine_run.size());
  for (std::size_t k = 0; k < count; ++k) {
    worst = std::max(worst, (coarse_run.x[k] - fine_run.x[k]).cwiseAbs().maxCoeff());
    worst = std::max(worst, (coarse_run.xi[k] - fine_run.xi[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

ErrorDynamicsResidual error_dynamics_audit(const Scenario& sc, const Trajectory& traj, double h_fd) {
  const Matrix L = laplacian(sc.graph);
  const Matrix l_pinv = laplacian_pseudoinverse(L, sc.graph);
  const auto n = static_cast<Eigen::Index>(sc.graph.size());
  auto f = [&](const NetworkState& st) { return derivative_compact_form(sc.graph, sc.gains, sc.sensing, st); };

  // K0 from the decomposition when one exists; otherwise F + K~ collapses to L + K1 anyway.
  Vector k0 = Vector::Zero(n);
  try {
    k0 = decompose_k1(sample_k1(sc.sensing, traj.times)).k0;
  } catch (const DecompositionInfeasible&) {
  }
  const Matrix F = L + Matrix(k0.asDiagonal());

  ErrorDynamicsResidual out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    if (t - h_fd < 0.0 || t + h_fd > sc.duration) continue;
    const NetworkState s{traj.x[k], traj.xi[k], t};
    const NetworkState ahead = rk4_step(f, s, h_fd);
    const NetworkState behind = rk4_step(f, s, -h_fd);
    try {
      const ErrorCoordinates now = error_coordinates(s, sc.sensing.k2(t), sc.sensing.inputs_at(t), l_pinv, sc.gains.alpha);
      const ErrorCoordinates fwd = error_coordinates(ahead, sc.sensing.k2(ahead.t), sc.sensing.inputs_at(ahead.t), l_pinv, sc.gains.alpha);
      const ErrorCoordinates bwd = error_coordinates(behind, sc.sensing.k2(behind.t), sc.sensing.inputs_at(behind.t), l_pinv, sc.gains.alpha);
      const Perturbations p = perturbations(sc.sensing, sc.gains, l_pinv, t, h_fd, sc.horizon());

      const Matrix k1 = sc.sensing.k1(t);
      const Matrix k_tilde = k1 - Matrix(k0.asDiagonal());
      const double a = sc.gains.alpha;
      const Vector delta_rhs = -a * (F * now.delta) - a * (k_tilde * now.delta) + L * now.e + p.s1;
      const Vector e_rhs = -sc.gains.gamma * (L * now.delta) - sc.gains.gamma * sc.gains.sigma * now.e + p.s2;

      const Vector delta_fd = (fwd.delta - bwd.delta) / (2 * h_fd);
      const Vector e_fd = (fwd.e - bwd.e) / (2 * h_fd);
      const double v_fd = (lyapunov(fwd.delta, fwd.e, sc.gains) - lyapunov(bwd.delta, bwd.e, sc.gains)) / (2 * h_fd);
      const double v_rate = lyapunov_rate(L, k1, now.delta, now.e, p.s1, p.s2, sc.gains);

      out.delta = std::max(out.delta, (delta_fd - delta_rhs).cwiseAbs().maxCoeff());
      out.e = std::max(out.e, (e_fd - e_rhs).cwiseAbs().maxCoeff());
      out.lyapunov = std::max(out.lyapunov, std::abs(v_fd - v_rate));
      ++out.samples;
    } catch (const NoActiveSensing&) {
    }
  }
  return out;
}

BoundEstimate scenario_bound(const Scenario& sc, std::optional<double> h_fd) {
  sc.validate();
  const Matrix L = laplacian(sc.graph);
  const Matrix l_pinv = laplacian_pseudoinverse(L, sc.graph);
  const std::vector<double> times = step_times(sc);
  const Decomposition decomposition = decompose_k1(sample_k1(sc.sensing, times));
  const SignalSuprema sup = signal_suprema(sc.sensing, sc.gains, l_pinv, times, h_fd.value_or(sc.dt / 10.0),
                                           sc.horizon());
  return ultimate_bound(L, sc.gains, decomposition, sup);
}

}  // namespace apnet
