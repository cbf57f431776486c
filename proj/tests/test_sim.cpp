#include "apnet/random.hpp"
#include "apnet/scenario_io.hpp"
#include "apnet/sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace apnet;

namespace {

Scenario lone_agent(double duration, double dt) {
  return Scenario{.name = "lone",
                  .graph = build_graph(1, {}),
                  .gains = {1.0, 1.0, 0.0},
                  .sensing = {{}, {Constant{1.0}}, WeightConfig(1, 1, {{0, 0, Constant{1.0}}})},
                  .x0 = Vector::Zero(1),
                  .xi0 = Vector::Zero(1),
                  .duration = duration,
                  .dt = dt,
                  .record_stride = 1};
}

}  // namespace

TEST_CASE("single agent relaxes as 1 - exp(-t)") {
  const Trajectory traj = integrate(lone_agent(5.0, 1e-3));
  REQUIRE(traj.size() == 5001);
  CHECK(traj.times.back() == doctest::Approx(5.0));
  CHECK(traj.x.back()(0) == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-10));
  CHECK(traj.x.back()(0) == doctest::Approx(0.993262053).epsilon(1e-9));
  CHECK(traj.x[1000](0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
  CHECK(traj.epsilon.back() == 1.0);
  CHECK(traj.delta_norm.back() == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
}

TEST_CASE("scenario validation") {
  Scenario sc = lone_agent(1.0, 0.1);
  CHECK_NOTHROW(sc.validate());
  CHECK(sc.steps() == 10);

  Scenario bad = sc;
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = sc;
  bad.x0 = Vector::Zero(2);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = sc;
  bad.gains.alpha = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Scenario split = builtin_scenario("fig2-identical");
  split.graph = build_graph(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(split.validate(), std::invalid_argument);
}

TEST_CASE("record stride keeps the final sample") {
  Scenario sc = lone_agent(1.0, 0.1);
  sc.record_stride = 3;
  const Trajectory traj = integrate(sc);
  REQUIRE(traj.size() == 5);
  CHECK(traj.times[3] == doctest::Approx(0.9));
  CHECK(traj.times[4] == doctest::Approx(1.0));
}

TEST_CASE("equilibrium is preserved") {
  Scenario sc = builtin_scenario("fig2-heterogeneous");
  const Matrix L = laplacian(sc.graph);
  const Matrix pinv = laplacian_pseudoinverse(L, sc.graph);
  const Matrix k2 = sc.sensing.k2(0.0);
  const Vector c = sc.sensing.inputs_at(0.0);
  const double eps = weighted_average(k2, c);
  sc.x0 = Vector::Constant(4, eps);
  sc.xi0 = sc.gains.alpha * pinv * k_c(sc.sensing.k1(0.0), k2) * c;
  sc.duration = 2.0;
  const Trajectory traj = integrate(sc);
  double worst = 0.0;
  for (double d : traj.delta_norm) worst = std::max(worst, d);
  CHECK(worst <= 1e-12);
  CHECK(traj.lyapunov.back() <= 1e-24);
}

TEST_CASE("integration is deterministic") {
  const Scenario sc = builtin_scenario("fig4-heterogeneous");
  Scenario shorter = sc;
  shorter.duration = 2.0;
  const Trajectory a = integrate(shorter);
  const Trajectory b = integrate(shorter);
  CHECK(a.times == b.times);
  CHECK(a.x == b.x);
  CHECK(a.xi == b.xi);
  CHECK(a.lyapunov == b.lyapunov);
}

TEST_CASE("one step matches RK4 over the agent form") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto rng = trial_rng(8, trial);
    const std::size_t n = 2 + trial;
    Scenario sc{.name = "step",
                .graph = random_connected_graph(n, 0.3, rng),
                .gains = {2.0, 3.0, 0.1},
                .sensing = random_sensing_model(n, rng),
                .x0 = Vector::LinSpaced(n, 0.0, 1.0),
                .xi0 = Vector::LinSpaced(n, 1.0, 0.0),
                .duration = 0.01,
                .dt = 0.01,
                .record_stride = 1};
    const Trajectory traj = integrate(sc);
    auto f = [&](const NetworkState& s) { return derivative_agent_form(sc.graph, sc.gains, sc.sensing, s); };
    const NetworkState next = rk4_step(f, NetworkState{sc.x0, sc.xi0, 0.0}, sc.dt);
    CHECK((traj.x.back() - next.x).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((traj.xi.back() - next.xi).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("convergence_check") {
  Trajectory t;
  for (int k = 0; k <= 10; ++k) {
    t.times.push_back(k);
    t.x.push_back(Vector::Constant(2, 1.0 + std::pow(0.1, k)));
  }
  // |x - 1| = 10^-k: within 1e-3 from k = 3.
  Convergence c = convergence_check(t, 1.0, 1e-3, 5.0);
  CHECK(c.converged);
  CHECK(c.first_time == 3.0);
  c = convergence_check(t, 1.0, 1e-12, 5.0);
  CHECK_FALSE(c.converged);
  c = convergence_check(t, 5.0, 1e-3, 5.0);
  CHECK_FALSE(c.converged);
  CHECK(std::isnan(c.first_time));
}

TEST_CASE("halving the step shows fourth-order convergence") {
  Scenario sc = builtin_scenario("smooth-sinusoid");
  const double coarse = halve_step_audit(sc);
  sc.dt /= 2;
  sc.record_stride *= 2;
  const double fine = halve_step_audit(sc);
  CHECK(coarse > 0.0);
  CHECK(coarse / fine > 12.0);
  CHECK(coarse / fine < 20.0);
}

TEST_CASE("divergence is reported") {
  Scenario sc = lone_agent(100.0, 1.0);
  sc.gains.alpha = 1e6;
  CHECK_THROWS_AS(integrate(sc), NumericalDivergence);
}

TEST_CASE("epsilon is flagged where no weight is active") {
  Scenario sc = lone_agent(3.0, 0.01);
  sc.sensing = SensingModel{{}, {Constant{2.0}},
                            WeightConfig(1, 1, {{0, 0, PiecewiseLinear{{{1.0, 1.0}, {2.0, 0.0}}}}})};
  const Trajectory traj = integrate(sc);
  CHECK(traj.epsilon_valid.front() == 1);
  CHECK(traj.epsilon_valid.back() == 0);
  CHECK(traj.epsilon.back() == 2.0);
  CHECK(std::isnan(traj.bound.back()));
}

TEST_CASE("bound holds after settling on the smooth scenario") {
  const Scenario sc = builtin_scenario("smooth-sinusoid");
  Scenario fine = sc;
  fine.dt = 1e-3;
  fine.record_stride = 10;
  fine.duration = 40.0;
  const Trajectory traj = integrate(fine);
  std::vector<double> d2;
  for (double d : traj.delta_norm) d2.push_back(d * d);
  const Settling s = empirical_settling(traj.times, d2, traj.epsilon_valid);
  const BoundEstimate b = scenario_bound(fine);
  CHECK(s.sup_after <= b.bound);
}
