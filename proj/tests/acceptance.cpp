// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "apnet/parallel.hpp"
#include "apnet/random.hpp"
#include "apnet/scenario_io.hpp"
#include "apnet/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace apnet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_deviation(const Vector& x, double target) { return (x.array() - target).abs().maxCoeff(); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Hand evaluations of the weighted average for the line scenario.
constexpr double kHeterogeneousAverage = 1.431818;  // (1 + 0.1 + 0.05 + 2) / 2.2
constexpr double kIdenticalAverage = 1.125;         // (1 + 1 + 0.5 + 2) / 4
constexpr double kTrueAverage = 1.5;                // targets at q = 1 and q = 2

Outcome fig2_heterogeneous() {
  const Scenario sc = builtin_scenario("fig2-heterogeneous");
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = integrate(sc);
  const double seconds = seconds_since(start);
  const double dev = max_deviation(traj.x.back(), kHeterogeneousAverage);
  const bool reached = std::abs(traj.times.back() - 10.0) < 1e-9;
  return {reached && dev <= 1e-3 && seconds < 2.0,
          fmt("max|x_i - %.6f| = %.3e at t = %.3f s; runtime %.3f s (limit 2 s)", kHeterogeneousAverage,
              dev, traj.times.back(), seconds)};
}

Outcome fig2_identical() {
  const Trajectory same = integrate(builtin_scenario("fig2-identical"));
  const Trajectory het = integrate(builtin_scenario("fig2-heterogeneous"));
  const double dev = max_deviation(same.x.back(), kIdenticalAverage);
  const double het_gap = max_deviation(het.x.back(), kTrueAverage);
  const double same_gap = max_deviation(same.x.back(), kTrueAverage);
  return {dev <= 1e-3 && het_gap < same_gap,
          fmt("max|x_i - 1.125| = %.3e at t = 10 s; distance to 1.5: heterogeneous %.4f < identical %.4f",
              dev, het_gap, same_gap)};
}

Outcome constant_regime() {
  constexpr std::size_t kGraphs = 50;
  double worst_delta = 0.0;
  double worst_rise = 0.0;
  double longest = 0.0;
  std::size_t failures = 0;
  for (std::size_t k = 0; k < kGraphs; ++k) {
    auto rng = trial_rng(2024, k);
    const Scenario sc = random_constant_scenario(8, rng);
    const Matrix L = laplacian(sc.graph);
    const Matrix pinv = laplacian_pseudoinverse(L, sc.graph);
    const Matrix k2 = sc.sensing.k2(0.0);
    const Matrix k1 = sc.sensing.k1(0.0);
    const Vector c = sc.sensing.inputs_at(0.0);
    const double eps = weighted_average(k2, c);
    const Vector xi_star = sc.gains.alpha * pinv * k_c(k1, k2) * c;

    auto v_of = [&](const NetworkState& s) {
      return lyapunov(delta(s.x, eps), s.xi - xi_star, sc.gains);
    };
    double previous = v_of(NetworkState{sc.x0, sc.xi0, 0.0});
    double rise = 0.0;
    double last_delta = 0.0;
    IntegrateOptions opts;
    opts.analysis = false;
    opts.on_step = [&](const NetworkState& s) {
      const double v = v_of(s);
      rise = std::max(rise, v - previous);
      previous = v;
      last_delta = delta(s.x, eps).norm();
    };
    integrate(sc, opts);
    // The horizon is 100 / lambda_min(F) by construction.
    longest = std::max(longest, sc.duration);
    worst_delta = std::max(worst_delta, last_delta);
    worst_rise = std::max(worst_rise, rise);
    if (last_delta >= 1e-6 || rise > 1e-9) ++failures;
  }
  return {failures == 0,
          fmt("%zu graphs (n <= 8): worst |delta(T)| = %.3e (< 1e-6), worst per-step V rise = %.3e "
              "(<= 1e-9), longest T = %.1f s",
              kGraphs, worst_delta, worst_rise, longest)};
}

Outcome spectral_suite() {
  const PropertyReport r = run_property_suite(200, 7);
  const PropertyResult& l1 = r["laplacian-spectrum"];
  const PropertyResult& l2 = r["pseudoinverse-identity"];
  const PropertyResult& l3 = r["grounded-laplacian-positive"];
  return {l1.passed() && l2.passed() && l3.passed() && l1.trials == 200 && l2.trials == 200 &&
              l3.trials == 200,
          fmt("200 trials: spectrum failures %zu (worst %.2e), pseudoinverse failures %zu (worst %.2e), "
              "lambda_min(L+K) failures %zu",
              l1.failures, l1.worst, l2.failures, l2.worst, l3.failures)};
}

Outcome form_equivalence() {
  const PropertyReport r = run_property_suite(200, 11);
  const PropertyResult& forms = r["agent-vs-compact-form"];
  const PropertyResult& uniform = r["unweighted-form-recovery"];
  return {forms.passed() && uniform.passed() && forms.worst <= 1e-12 && uniform.worst <= 1e-12,
          fmt("200 trials: agent vs compact worst %.2e, unweighted recovery worst %.2e (limit 1e-12)",
              forms.worst, uniform.worst)};
}

Outcome error_dynamics() {
  Scenario sc = builtin_scenario("fig2-heterogeneous");
  sc.dt = 1e-3;
  const Trajectory traj = integrate(sc);
  const ErrorDynamicsResidual r = error_dynamics_audit(sc, traj, 1e-4);
  return {r.samples > 0 && r.delta <= 1e-4 && r.e <= 1e-4,
          fmt("%zu samples: delta residual %.3e, e residual %.3e (limit 1e-4); V rate residual %.3e",
              r.samples, r.delta, r.e, r.lyapunov)};
}

// Time-averaged |mean(x) - q(t)| over the final target period.
double tracking_error(const Scenario& sc, const Trajectory& traj, double window) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] < traj.times.back() - window) continue;
    sum += std::abs(traj.x[k].mean() - sc.sensing.targets[0].value(traj.times[k]));
    ++count;
  }
  return sum / static_cast<double>(count);
}

Outcome ultimate_bound_fig4() {
  const Scenario het = builtin_scenario("fig4-heterogeneous");
  const Scenario same = builtin_scenario("fig4-identical");
  const Trajectory th = integrate(het);
  const Trajectory ts = integrate(same);
  std::vector<double> d2;
  for (double d : th.delta_norm) d2.push_back(d * d);
  const Settling s = empirical_settling(th.times, d2, th.epsilon_valid);
  const BoundEstimate b = scenario_bound(het);
  const double period = std::get<CirclePath>(het.sensing.targets[0].path).period;
  const double eh = tracking_error(het, th, period);
  const double es = tracking_error(same, ts, period);
  return {s.sup_after <= b.bound && eh < es,
          fmt("sup |delta|^2 after T = %.2f s is %.4f <= bound %.4f; tracking error over final %.0f s: "
              "heterogeneous %.4f < identical %.4f",
              s.time, s.sup_after, b.bound, period, eh, es)};
}

Outcome gain_monotonicity() {
  Scenario low = builtin_scenario("fig4-heterogeneous");
  Scenario high = low;
  low.gains.alpha = 5.0;
  low.gains.gamma = 50.0;
  high.gains.alpha = 20.0;
  high.gains.gamma = 800.0;
  const BoundEstimate bl = scenario_bound(low);
  const BoundEstimate bh = scenario_bound(high);
  return {bh.bound < bl.bound,
          fmt("bound at (5, 50) = %.4f, at (20, 800) = %.4f", bl.bound, bh.bound)};
}

Outcome integrator_order() {
  Scenario sc = builtin_scenario("smooth-sinusoid");
  const double coarse = halve_step_audit(sc);
  sc.dt /= 2;
  sc.record_stride *= 2;
  const double fine = halve_step_audit(sc);
  const double ratio = coarse / fine;
  return {ratio >= 12.0 && ratio <= 20.0,
          fmt("discrepancy %.3e at dt = 0.02, %.3e at dt = 0.01; ratio %.2f (window [12, 20])", coarse, fine,
              ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fig2 heterogeneous consensus", fig2_heterogeneous},
      {"fig2 identical weights", fig2_identical},
      {"constant regime on random graphs", constant_regime},
      {"graph spectral properties", spectral_suite},
      {"form equivalence", form_equivalence},
      {"error dynamics identity", error_dynamics},
      {"ultimate bound on fig4", ultimate_bound_fig4},
      {"gain monotonicity", gain_monotonicity},
      {"integrator order", integrator_order},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
