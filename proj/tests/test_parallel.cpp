#include "apnet/parallel.hpp"
#include "apnet/random.hpp"
#include "apnet/scenario_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace apnet;

TEST_CASE("trial generators are reproducible") {
  auto a = trial_rng(42, 3);
  auto b = trial_rng(42, 3);
  auto c = trial_rng(42, 4);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
}

TEST_CASE("property suite passes and matches its serial reference") {
  const PropertyReport parallel = run_property_suite(60, 1234);
  const PropertyReport serial = run_property_suite_serial(60, 1234);
  CHECK(parallel == serial);
  CHECK(parallel.passed());
  CHECK(parallel.properties.size() == 10);
  for (const auto& p : parallel.properties) {
    CAPTURE(p.name);
    CHECK(p.trials == 60);
    CHECK(p.failures == 0);
    if (p.tolerance > 0.0) CHECK(p.worst <= p.tolerance);
  }
  CHECK(run_property_suite(60, 1234) == parallel);
  CHECK_FALSE(run_property_suite(60, 1235) == parallel);
  CHECK_THROWS_AS(run_property_suite(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_property_suite_serial(0, 1), std::invalid_argument);
  CHECK_THROWS(parallel["no-such-property"]);

  std::ostringstream out;
  print_report(out, parallel);
  CHECK(out.str().find("agent-vs-compact-form") != std::string::npos);
}

TEST_CASE("batch integration matches serial") {
  std::vector<Scenario> batch;
  for (std::uint64_t k = 0; k < 6; ++k) {
    auto rng = trial_rng(77, k);
    Scenario sc = random_constant_scenario(6, rng);
    sc.duration = std::min(sc.duration, 50 * sc.dt);
    batch.push_back(std::move(sc));
  }
  batch.push_back(builtin_scenario("smooth-sinusoid"));
  const auto a = integrate_batch(batch);
  const auto b = integrate_batch_serial(batch);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].x == b[k].x);
    CHECK(a[k].lyapunov == b[k].lyapunov);
  }

  Scenario bad = builtin_scenario("smooth-sinusoid");
  bad.gains.alpha = 1e6;
  bad.dt = 1.0;
  bad.duration = 100.0;
  batch.push_back(bad);
  CHECK_THROWS_AS(integrate_batch(batch), NumericalDivergence);
  CHECK_THROWS_AS(integrate_batch_serial(batch), NumericalDivergence);
}
