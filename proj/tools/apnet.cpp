// apnet: simulate active-passive sensing networks, verify the supporting
// graph/dynamics properties, and estimate ultimate bounds.
//
// Exit codes: 0 success, 1 property or bound failure, 2 usage/parse/I-O error,
// 3 numerical divergence.

#include "apnet/parallel.hpp"
#include "apnet/scenario_io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kDivergence = 3 };

// Slack on |delta|^2 for integration error when the bound is (near) zero.
constexpr double kIntegratorTolerance = 1e-10;

struct ScenarioOptions {
  std::string builtin;
  std::string file;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> sigma;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o) {
  auto* group = cmd->add_option_group("source");
  group->add_option("--builtin", o.builtin, "built-in scenario name");
  group->add_option("--scenario", o.file, "scenario JSON file");
  group->require_option(1);
  cmd->add_option("--dt", o.dt, "override integration step (s)")->check(CLI::PositiveNumber);
  cmd->add_option("--duration", o.duration, "override horizon (s)")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha, "override alpha")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", o.gamma, "override gamma")->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", o.sigma, "override sigma")->check(CLI::NonNegativeNumber);
}

apnet::Scenario resolve(const ScenarioOptions& o) {
  apnet::Scenario sc = o.file.empty() ? apnet::builtin_scenario(o.builtin) : apnet::load_scenario(o.file);
  if (o.dt) sc.dt = *o.dt;
  if (o.duration) sc.duration = *o.duration;
  if (o.alpha) sc.gains.alpha = *o.alpha;
  if (o.gamma) sc.gains.gamma = *o.gamma;
  if (o.sigma) sc.gains.sigma = *o.sigma;
  sc.validate();
  spdlog::info("scenario '{}': n={}, m={}, alpha={}, gamma={}, sigma={}, dt={}, duration={}", sc.name,
               sc.graph.size(), sc.sensing.inputs.size(), sc.gains.alpha, sc.gains.gamma, sc.gains.sigma,
               sc.dt, sc.duration);
  return sc;
}

std::vector<double> delta_squared(const apnet::Trajectory& traj) {
  std::vector<double> out(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) out[k] = traj.delta_norm[k] * traj.delta_norm[k];
  return out;
}

void emit_csv(const std::string& output, const apnet::Trajectory& traj) {
  if (output.empty() || output == "-") {
    apnet::write_csv(std::cout, traj);
  } else {
    apnet::write_csv(output, traj);
    spdlog::info("wrote {} samples to {}", traj.size(), output);
  }
}

int cmd_simulate(const ScenarioOptions& so, const std::string& output) {
  const apnet::Scenario sc = resolve(so);
  const apnet::Trajectory traj = apnet::integrate(sc);
  emit_csv(output, traj);

  std::ostream& log = (output.empty() || output == "-") ? std::cerr : std::cout;
  const double eps = traj.epsilon.back();
  const double spread = (traj.x.back().array() - eps).abs().maxCoeff();
  const std::vector<double> dsq = delta_squared(traj);
  const apnet::Settling settle = apnet::empirical_settling(traj.times, dsq, traj.epsilon_valid);
  log << std::setprecision(9) << "scenario        " << sc.name << '\n'
      << "final epsilon   " << eps << '\n'
      << "final max|x-eps| " << spread << '\n'
      << "empirical T     " << settle.time << '\n';
  try {
    const apnet::BoundEstimate b = apnet::scenario_bound(sc);
    log << "ultimate bound  " << b.bound << '\n';
  } catch (const apnet::Error& e) {
    log << "ultimate bound  unavailable (" << e.what() << ")\n";
  }
  return kOk;
}

int cmd_verify(std::size_t trials, std::uint64_t seed) {
  const apnet::PropertyReport report = apnet::run_property_suite(trials, seed);
  apnet::print_report(std::cout, report);
  return report.passed() ? kOk : kFailure;
}

int cmd_bound(const ScenarioOptions& so, const std::string& output) {
  const apnet::Scenario sc = resolve(so);
  std::cout << std::setprecision(9) << "scenario          " << sc.name << '\n';
  apnet::BoundEstimate b;
  try {
    b = apnet::scenario_bound(sc);
  } catch (const apnet::DecompositionInfeasible& e) {
    std::cout << "bound             not computable: " << e.what() << '\n';
    const apnet::Matrix L = apnet::laplacian(sc.graph);
    double worst = INFINITY;
    for (double t : apnet::step_times(sc)) {
      worst = std::min(worst, apnet::f_matrix_min_eig(L, sc.sensing.k2(t).rowwise().sum()));
    }
    std::cout << "min_t lambda_min(L+K1(t)) " << worst << '\n';
    return kFailure;
  } catch (const apnet::BoundUndefined& e) {
    std::cout << "bound             not computable: " << e.what() << '\n';
    return kFailure;
  }

  const apnet::Trajectory traj = apnet::integrate(sc);
  const std::vector<double> dsq = delta_squared(traj);
  const apnet::Settling settle = apnet::empirical_settling(traj.times, dsq, traj.epsilon_valid);
  std::cout << "eps_dot*          " << b.eps_dot_star << '\n'
            << "p1*               " << b.p1_star << '\n'
            << "p2*               " << b.p2_star << '\n'
            << "s1*               " << b.s1_star << '\n'
            << "s2*               " << b.s2_star << '\n'
            << "lambda_min(F)     " << b.lambda_min_f << '\n'
            << "bound             " << b.bound << '\n'
            << "empirical T       " << settle.time << '\n'
            << "max |delta|^2 t>=T " << settle.sup_after << '\n';
  if (!output.empty()) apnet::write_csv(output, traj);
  const bool holds = settle.sup_after <= b.bound + kIntegratorTolerance;
  std::cout << (holds ? "bound holds" : "bound VIOLATED") << '\n';
  return holds ? kOk : kFailure;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("apnet");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("APNET_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Active-passive networked sensing with heterogeneous value of information"};
  app.require_subcommand(1);

  ScenarioOptions sim_opts;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write the CSV trajectory");
  add_scenario_options(simulate, sim_opts);
  simulate->add_option("-o,--output", sim_out, "CSV output path (stdout if omitted)");

  std::size_t trials = 200;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "run the randomized property suite");
  verify->add_option("--trials", trials, "number of random trials")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "random seed");

  ScenarioOptions bound_opts;
  std::string bound_out;
  auto* bound = app.add_subcommand("bound", "estimate the ultimate bound and compare with simulation");
  add_scenario_options(bound, bound_opts);
  bound->add_option("-o,--output", bound_out, "CSV output path for the per-sample trajectory");

  app.add_subcommand("list", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim_opts, sim_out);
    if (*verify) return cmd_verify(trials, seed);
    if (*bound) return cmd_bound(bound_opts, bound_out);
    for (const std::string& name : apnet::builtin_names()) std::cout << name << '\n';
    return kOk;
  } catch (const apnet::NumericalDivergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const apnet::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const apnet::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
