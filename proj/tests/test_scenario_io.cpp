#include "apnet/scenario_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace apnet;
using nlohmann::json;

namespace {

std::string parse_error_path(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ParseError& e) {
    return e.path;
  }
  return "<accepted>";
}

json minimal_doc() {
  return json::parse(R"({
    "graph": {"n": 3, "edges": [[1, 2], [2, 3]]},
    "gains": {"alpha": 2, "gamma": 4},
    "inputs": [{"kind": "constant", "value": 1.5}, {"kind": "sinusoid", "amplitude": 1, "frequency": 2}],
    "weights": [{"agent": 1, "input": 1, "signal": {"kind": "constant", "value": 0.5}},
                {"agent": 3, "input": 2, "signal": {"kind": "piecewise-linear", "points": [[0, 0.2], [1, 0.9]]}}],
    "sim": {"duration": 2}
  })");
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("apnet_test_" + name);
}

}  // namespace

TEST_CASE("minimal document uses defaults and 1-based indices") {
  const Scenario sc = scenario_from_json(minimal_doc());
  CHECK(sc.graph.size() == 3);
  CHECK(sc.graph.edges()[1] == Edge{1, 2});
  CHECK(sc.gains.sigma == 0.0);
  CHECK(sc.dt == 1e-3);
  CHECK(sc.record_stride == 1);
  CHECK(sc.x0 == Vector::Zero(3));
  CHECK(sc.sensing.weights.entries()[1].agent == 2);
  CHECK(sc.sensing.k2(1.0)(2, 1) == doctest::Approx(0.9));
}

TEST_CASE("parse errors are located") {
  json doc = minimal_doc();
  doc["weights"][0]["signal"]["value"] = 1.5;
  CHECK(parse_error_path(doc) == "/weights/0/signal");

  doc = minimal_doc();
  doc.erase("gains");
  CHECK(parse_error_path(doc) == "/gains");

  doc = minimal_doc();
  doc["gains"]["alpha"] = "fast";
  CHECK(parse_error_path(doc) == "/gains/alpha");

  doc = minimal_doc();
  doc["gains"]["gamma"] = -1;
  CHECK(parse_error_path(doc) == "/gains");

  doc = minimal_doc();
  doc["graph"]["edges"].push_back({2, 2});
  CHECK(parse_error_path(doc) == "/graph/edges");

  doc = minimal_doc();
  doc["graph"]["edges"] = json::array({json::array({1, 2})});
  CHECK(parse_error_path(doc) == "/graph");

  doc = minimal_doc();
  doc["weights"][1]["agent"] = 4;
  CHECK(parse_error_path(doc) == "/weights/1/agent");

  doc = minimal_doc();
  doc["inputs"].push_back({{"kind", "constant"}, {"value", 1}});
  doc["inputs"].push_back({{"kind", "constant"}, {"value", 1}});
  CHECK(parse_error_path(doc) == "/inputs");

  doc = minimal_doc();
  doc["inputs"][0]["kind"] = "square";
  CHECK(parse_error_path(doc) == "/inputs/0/kind");

  doc = minimal_doc();
  doc["weights"][1]["signal"]["points"] = json::parse("[[1, 0.2], [0, 0.9]]");
  CHECK(parse_error_path(doc) == "/weights/1/signal");

  doc = minimal_doc();
  doc["sim"]["dt"] = 0;
  CHECK(parse_error_path(doc) == "/sim");

  doc = minimal_doc();
  doc["init"] = {{"x0", {1, 2}}};
  CHECK(parse_error_path(doc) == "/init/x0");

  doc = minimal_doc();
  doc["weights"] = json::array();
  CHECK(parse_error_path(doc) == "/weights");
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/apnet.json"), IoError);
  const auto path = temp_file("broken.json");
  {
    std::ofstream out(path);
    out << "{\"graph\": ";
  }
  CHECK_THROWS_AS(load_scenario(path.string()), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("round trip reproduces the trajectory") {
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    Scenario sc = builtin_scenario(name);
    sc.duration = std::min(sc.duration, 1.0);
    const auto path = temp_file(name + ".json");
    save_scenario(sc, path.string());
    const Scenario back = load_scenario(path.string());
    std::filesystem::remove(path);
    CHECK(back.name == sc.name);
    CHECK(back.gains.alpha == sc.gains.alpha);
    CHECK(back.gains.gamma == sc.gains.gamma);
    CHECK(back.gains.sigma == sc.gains.sigma);
    CHECK(back.graph.edges() == sc.graph.edges());
    const Trajectory a = integrate(sc);
    const Trajectory b = integrate(back);
    CHECK(a.times == b.times);
    CHECK(a.x == b.x);
    CHECK(a.xi == b.xi);
  }
}

TEST_CASE("builtins") {
  CHECK(builtin_names().size() == 6);
  CHECK_THROWS_AS(builtin_scenario("fig3"), std::invalid_argument);
  const Scenario fig2 = builtin_scenario("fig2-heterogeneous");
  CHECK(fig2.gains.alpha == 5.0);
  CHECK(fig2.gains.gamma == 10.0);
  CHECK(fig2.gains.sigma == 0.0);
  CHECK(fig2.sensing.inputs_at(0.0) == (Vector(4) << 1.0, 1.0, 0.5, 2.0).finished());
  const Scenario fig4 = builtin_scenario("fig4-identical");
  CHECK(fig4.gains.alpha == 20.0);
  CHECK(fig4.gains.gamma == 150.0);
  CHECK(fig4.gains.sigma == 0.1);
  CHECK(fig4.graph.size() == 9);
  CHECK(fig4.graph.edges().size() == 12);
  for (const std::string& name : builtin_names()) CHECK_NOTHROW(builtin_scenario(name).validate());
}

TEST_CASE("CSV layout") {
  Scenario sc = builtin_scenario("fig2-heterogeneous");
  sc.duration = 0.1;
  const Trajectory traj = integrate(sc);
  std::ostringstream out;
  write_csv(out, traj);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_1,x_2,x_3,x_4,xi_1,xi_2,xi_3,xi_4,epsilon,epsilon_valid,delta_norm,lyapunov,bound");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 2 * 4 + 5);
  }
  CHECK(rows == traj.size());

  // Twelve significant digits.
  Trajectory one;
  one.times = {1.0 / 3.0};
  one.x = {Vector::Constant(1, 2.0 / 3.0)};
  one.xi = {Vector::Zero(1)};
  one.epsilon = {0.1};
  one.epsilon_valid = {1};
  one.delta_norm = {0.0};
  one.lyapunov = {0.0};
  one.bound = {std::numeric_limits<double>::quiet_NaN()};
  std::ostringstream small;
  write_csv(small, one);
  CHECK(small.str() == "t,x_1,xi_1,epsilon,epsilon_valid,delta_norm,lyapunov,bound\n"
                       "0.333333333333,0.666666666667,0,0.1,1,0,0,nan\n");
}
