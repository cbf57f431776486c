#include "apnet/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace apnet {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Read-only view of a JSON value that knows where it sits in the document.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) throw ParseError(path_ + "/" + key, "missing required field");
    return Node(j_.at(key), path_ + "/" + key);
  }

  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  long integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }

  // 1-based index in [1, count] converted to 0-based.
  int index(std::size_t count, const char* what) const {
    const long v = integer();
    if (v < 1 || static_cast<std::size_t>(v) > count) {
      fail(std::string(what) + " index " + std::to_string(v) + " outside [1, " +
           std::to_string(count) + "]");
    }
    return static_cast<int>(v - 1);
  }

  Point point() const {
    if (size() != 2) fail("expected [x, y]");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }

  Vector vector(std::size_t n) const {
    if (size() != n) fail("expected " + std::to_string(n) + " entries");
    Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = at(i).number();
    return v;
  }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(path_, reason); }

 private:
  const json& j_;
  std::string path_;
};

template <class F>
auto located(const Node& node, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ParseError(node.path(), e.what());
  }
}

Target parse_target(const Node& node) {
  Target target;
  const Node path = node.at("path");
  const std::string kind = path.at("kind").string();
  if (kind == "fixed") {
    target.path = FixedPath{path.at("position").point()};
  } else if (kind == "circle") {
    CirclePath c{path.at("center").point(), path.at("radius").number(), path.at("period").number(),
                 path.number_or("phase", 0.0)};
    if (!(c.period > 0.0)) path.at("period").fail("period must be positive");
    target.path = c;
  } else {
    path.at("kind").fail("unknown path kind '" + kind + "'");
  }
  const Node quantity = node.at("quantity");
  const std::string qkind = quantity.at("kind").string();
  if (qkind == "constant") {
    target.quantity = ConstantQuantity{quantity.at("value").number()};
  } else if (qkind == "x-coordinate") {
    target.quantity = XCoordinateQuantity{};
  } else {
    quantity.at("kind").fail("unknown quantity kind '" + qkind + "'");
  }
  return target;
}

PiecewiseLinear parse_breakpoints(const Node& node) {
  const Node points = node.at("points");
  PiecewiseLinear p;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Node pt = points.at(k);
    if (pt.size() != 2) pt.fail("expected [t, value]");
    p.points.push_back({pt.at(std::size_t{0}).number(), pt.at(std::size_t{1}).number()});
  }
  return p;
}

InputSignal parse_input(const Node& node, std::size_t target_count) {
  const std::string kind = node.at("kind").string();
  InputSignal s;
  if (kind == "constant") {
    s = Constant{node.at("value").number()};
  } else if (kind == "sinusoid") {
    s = Sinusoid{node.number_or("amplitude", 1.0), node.number_or("frequency", 1.0),
                 node.number_or("phase", 0.0), node.number_or("offset", 0.0)};
  } else if (kind == "piecewise-linear") {
    s = parse_breakpoints(node);
  } else if (kind == "target-track") {
    TargetTrack m;
    m.target = node.at("target").index(target_count, "target");
    m.accuracy = node.number_or("accuracy", 1.0);
    if (node.has("falloff")) {
      const Node f = node.at("falloff");
      m.falloff = AccuracyFalloff{f.at("sensor").point(), f.at("range").number()};
    }
    s = m;
  } else {
    node.at("kind").fail("unknown input kind '" + kind + "'");
  }
  located(node, [&] { validate(s, target_count); return 0; });
  return s;
}

WeightSignal parse_weight(const Node& node, std::size_t target_count) {
  const std::string kind = node.at("kind").string();
  WeightSignal s;
  if (kind == "constant") {
    s = Constant{node.at("value").number()};
  } else if (kind == "piecewise-linear") {
    s = parse_breakpoints(node);
  } else if (kind == "distance-based") {
    s = DistanceBased{node.at("radius").number(), node.at("sensor").point(),
                      node.at("target").index(target_count, "target")};
  } else {
    node.at("kind").fail("unknown weight kind '" + kind + "'");
  }
  located(node, [&] { validate(s, target_count); return 0; });
  return s;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json breakpoints_json(const PiecewiseLinear& p) {
  json pts = json::array();
  for (const Breakpoint& b : p.points) pts.push_back(json::array({b.t, b.value}));
  return {{"kind", "piecewise-linear"}, {"points", pts}};
}

json target_json(const Target& t) {
  json j;
  j["path"] = std::visit(
      overloaded{
          [](const FixedPath& f) { return json{{"kind", "fixed"}, {"position", point_json(f.position)}}; },
          [](const CirclePath& c) {
            return json{{"kind", "circle"}, {"center", point_json(c.center)}, {"radius", c.radius},
                        {"period", c.period}, {"phase", c.phase}};
          },
      },
      t.path);
  j["quantity"] = std::visit(
      overloaded{
          [](const ConstantQuantity& q) { return json{{"kind", "constant"}, {"value", q.value}}; },
          [](const XCoordinateQuantity&) { return json{{"kind", "x-coordinate"}}; },
      },
      t.quantity);
  return j;
}

json input_json(const InputSignal& s) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
          [](const Sinusoid& w) {
            return json{{"kind", "sinusoid"}, {"amplitude", w.amplitude}, {"frequency", w.frequency},
                        {"phase", w.phase}, {"offset", w.offset}};
          },
          [](const PiecewiseLinear& p) { return breakpoints_json(p); },
          [](const TargetTrack& m) {
            json j{{"kind", "target-track"}, {"target", m.target + 1}, {"accuracy", m.accuracy}};
            if (m.falloff) {
              j["falloff"] = {{"sensor", point_json(m.falloff->sensor)}, {"range", m.falloff->range}};
            }
            return j;
          },
      },
      s);
}

json weight_json(const WeightSignal& s) {
  return std::visit(
      overloaded{
          [](const Constant& c) { return json{{"kind", "constant"}, {"value", c.value}}; },
          [](const PiecewiseLinear& p) { return breakpoints_json(p); },
          [](const DistanceBased& d) {
            return json{{"kind", "distance-based"}, {"radius", d.radius},
                        {"sensor", point_json(d.sensor)}, {"target", d.target + 1}};
          },
      },
      s);
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

Scenario scenario_from_json(const json& doc) {
  const Node root(doc, "");

  const Node graph = root.at("graph");
  const long n_raw = graph.at("n").integer();
  if (n_raw < 1) graph.at("n").fail("node count must be at least 1");
  const auto n = static_cast<std::size_t>(n_raw);
  std::vector<Edge> edges;
  const Node edge_list = graph.at("edges");
  for (std::size_t k = 0; k < edge_list.size(); ++k) {
    const Node e = edge_list.at(k);
    if (e.size() != 2) e.fail("expected [i, j]");
    edges.push_back({e.at(std::size_t{0}).index(n, "agent"), e.at(std::size_t{1}).index(n, "agent")});
  }
  Graph g = located(graph.at("edges"), [&] { return Graph(n, std::move(edges)); });
  if (!is_connected(g)) graph.fail("communication graph is not connected");

  const Node gains_node = root.at("gains");
  Gains gains{gains_node.at("alpha").number(), gains_node.at("gamma").number(),
              gains_node.number_or("sigma", 0.0)};
  located(gains_node, [&] { gains.validate(); return 0; });

  std::vector<Target> targets;
  if (root.has("targets")) {
    const Node list = root.at("targets");
    for (std::size_t k = 0; k < list.size(); ++k) targets.push_back(parse_target(list.at(k)));
  }

  std::vector<InputSignal> inputs;
  const Node input_list = root.at("inputs");
  for (std::size_t k = 0; k < input_list.size(); ++k) {
    inputs.push_back(parse_input(input_list.at(k), targets.size()));
  }
  if (inputs.size() > n) {
    input_list.fail("more inputs (" + std::to_string(inputs.size()) + ") than agents (" +
                    std::to_string(n) + ")");
  }

  std::vector<WeightEntry> entries;
  const Node weight_list = root.at("weights");
  for (std::size_t k = 0; k < weight_list.size(); ++k) {
    const Node w = weight_list.at(k);
    entries.push_back({w.at("agent").index(n, "agent"), w.at("input").index(inputs.size(), "input"),
                       parse_weight(w.at("signal"), targets.size())});
  }
  WeightConfig weights = located(weight_list, [&] { return WeightConfig(n, inputs.size(), std::move(entries)); });

  Vector x0 = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector xi0 = Vector::Zero(static_cast<Eigen::Index>(n));
  if (root.has("init")) {
    const Node init = root.at("init");
    if (init.has("x0")) x0 = init.at("x0").vector(n);
    if (init.has("xi0")) xi0 = init.at("xi0").vector(n);
  }

  const Node sim = root.at("sim");
  Scenario sc{
      .name = root.has("name") ? root.at("name").string() : std::string("scenario"),
      .graph = std::move(g),
      .gains = gains,
      .sensing = SensingModel{std::move(targets), std::move(inputs), std::move(weights)},
      .x0 = x0,
      .xi0 = xi0,
      .duration = sim.at("duration").number(),
      .dt = sim.number_or("dt", 1e-3),
      .record_stride = 1,
  };
  if (sim.has("record_stride")) {
    const long stride = sim.at("record_stride").integer();
    if (stride < 1) sim.at("record_stride").fail("must be at least 1");
    sc.record_stride = static_cast<std::size_t>(stride);
  }
  located(sim, [&] { sc.validate(); return 0; });
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json edges = json::array();
  for (const Edge& e : sc.graph.edges()) edges.push_back(json::array({e.u + 1, e.v + 1}));
  json targets = json::array();
  for (const Target& t : sc.sensing.targets) targets.push_back(target_json(t));
  json inputs = json::array();
  for (const InputSignal& s : sc.sensing.inputs) inputs.push_back(input_json(s));
  json weights = json::array();
  for (const WeightEntry& e : sc.sensing.weights.entries()) {
    weights.push_back({{"agent", e.agent + 1}, {"input", e.input + 1}, {"signal", weight_json(e.signal)}});
  }
  return {
      {"name", sc.name},
      {"graph", {{"n", sc.graph.size()}, {"edges", edges}}},
      {"gains", {{"alpha", sc.gains.alpha}, {"gamma", sc.gains.gamma}, {"sigma", sc.gains.sigma}}},
      {"targets", targets},
      {"inputs", inputs},
      {"weights", weights},
      {"init", {{"x0", vector_json(sc.x0)}, {"xi0", vector_json(sc.xi0)}}},
      {"sim", {{"duration", sc.duration}, {"dt", sc.dt}, {"record_stride", sc.record_stride}}},
  };
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open scenario file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << scenario_to_json(sc).dump(2) << '\n';
}

void write_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.x.empty() ? 0 : static_cast<std::size_t>(traj.x.front().size());
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",xi_" << i;
  out << ",epsilon,epsilon_valid,delta_norm,lyapunov,bound\n";

  const bool analysed = traj.epsilon.size() == traj.size();
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  std::ostringstream row;
  row << std::setprecision(12);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    row.str("");
    row << traj.times[k];
    for (std::size_t i = 0; i < n; ++i) row << ',' << traj.x[k](i);
    for (std::size_t i = 0; i < n; ++i) row << ',' << traj.xi[k](i);
    row << ',' << (analysed ? traj.epsilon[k] : nan) << ',' << (analysed ? int(traj.epsilon_valid[k]) : 0)
        << ',' << (analysed ? traj.delta_norm[k] : nan) << ',' << (analysed ? traj.lyapunov[k] : nan)
        << ',' << (analysed ? traj.bound[k] : nan) << '\n';
    out << row.str();
  }
}

void write_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  write_csv(out, traj);
  if (!out) throw IoError(path, "write failed");
}

}  // namespace apnet
