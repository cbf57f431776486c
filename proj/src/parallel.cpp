#include "apnet/parallel.hpp"

#include "apnet/analysis.hpp"
#include "apnet/random.hpp"


#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>

namespace apnet {

namespace {

enum Property : std::size_t {
  kSpectrum,
  kConnectivity,
  kPseudoinverse,
  kPinvSymmetry,
  kGrounded,
  kFormEquivalence,
  kUniformRecovery,
  kLcColumns,
  kWeightRange,
  kPassivity,
  kPropertyCount
};

struct PropertySpec {
  const char* name;
  double tolerance;
};

constexpr std::array<PropertySpec, kPropertyCount> kProperties{{
    {"laplacian-spectrum", 1e-10},
    {"connectivity-bfs-vs-spectral", 0.0},
    {"pseudoinverse-identity", 1e-8},
    {"pseudoinverse-symmetry", 1e-10},
    {"grounded-laplacian-positive", 0.0},
    {"agent-vs-compact-form", 1e-12},
    {"unweighted-form-recovery", 1e-12},
    {"lc-column-sums", 1e-12},
    {"weight-range", 0.0},
    {"passive-agent-isolation", 1e-12},
}};

struct Check {
  bool ok = true;
  double residual = 0.0;
};

using TrialOutcome = std::array<Check, kPropertyCount>;

NetworkState random_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  std::uniform_real_distribution<double> t(0.0, 5.0);
  NetworkState s{Vector(n), Vector(n), t(rng)};
  for (std::size_t i = 0; i < n; ++i) {
    s.x(i) = v(rng);
    s.xi(i) = v(rng);
  }
  return s;
}

Check residual_check(double residual, double tol) { return {residual <= tol, residual}; }

double max_abs(const StateDerivative& a, const StateDerivative& b) {
  return std::max((a.x - b.x).cwiseAbs().maxCoeff(), (a.xi - b.xi).cwiseAbs().maxCoeff());
}

TrialOutcome run_trial(std::uint64_t seed, std::size_t trial) {
  std::mt19937_64 rng = trial_rng(seed, trial);
  std::uniform_int_distribution<std::size_t> pick_n(2, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = pick_n(rng);
  TrialOutcome out;

  const Graph g = random_connected_graph(n, 0.25, rng);
  const Matrix L = laplacian(g);
  const SpectralData sd = spectrum(L);

  {
    const bool rows_zero = (L * Vector::Ones(n)).cwiseAbs().maxCoeff() == 0.0;
    const double lambda1 = std::abs(sd.eigenvalues(0));
    out[kSpectrum] = {rows_zero && lambda1 <= 1e-10 && sd.eigenvalues(1) > 1e-10, lambda1};
  }

  {
    // Sparse edge sets are often disconnected; both tests must agree.
    std::vector<Edge> sparse;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (unit(rng) < 1.5 / static_cast<double>(n)) sparse.push_back({int(i), int(j)});
    const Graph h(n, std::move(sparse));
    const bool spectral = spectrum(laplacian(h)).eigenvalues(1) > 1e-10;
    out[kConnectivity] = {spectral == is_connected(h) && is_connected(g), 0.0};
  }

  const Matrix pinv = laplacian_pseudoinverse(L, g);
  {
    const Matrix target = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
    out[kPseudoinverse] = residual_check((L * pinv - target).norm(), kProperties[kPseudoinverse].tolerance);
    out[kPinvSymmetry] = residual_check((pinv - pinv.transpose()).cwiseAbs().maxCoeff(),
                                        kProperties[kPinvSymmetry].tolerance);
  }

  {
    Vector k(n);
    for (std::size_t i = 0; i < n; ++i) k(i) = unit(rng) < 0.5 ? 0.0 : unit(rng);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    k(pick(rng)) = 0.05 + unit(rng);
    const double lambda_min = f_matrix_min_eig(L, k);
    Matrix f = L;
    f.diagonal() += k;
    const bool invertible = Eigen::FullPivLU<Matrix>(f).rank() == static_cast<Eigen::Index>(n);
    out[kGrounded] = {lambda_min > 0.0 && invertible, lambda_min};
  }

  const Gains gains{0.5 + 4.5 * unit(rng), 0.5 + 4.5 * unit(rng), 2.0 * unit(rng)};
  const SensingModel model = random_sensing_model(n, rng);
  const NetworkState s = random_state(n, rng);
  out[kFormEquivalence] = residual_check(
      max_abs(derivative_agent_form(g, gains, model, s), derivative_compact_form(g, gains, model, s)),
      kProperties[kFormEquivalence].tolerance);

  {
    std::vector<WeightEntry> ones;
    for (const WeightEntry& e : model.weights.entries()) ones.push_back({e.agent, e.input, Constant{1.0}});
    const SensingModel uniform{model.targets, model.inputs,
                               WeightConfig(n, model.inputs.size(), std::move(ones))};
    const Gains plain{gains.alpha, gains.gamma, 0.0};
    const StateDerivative reference =
        derivative_uniform_form(g, plain.alpha, plain.gamma, uniform.weights, uniform.inputs_at(s.t), s);
    const double r = std::max(max_abs(derivative_agent_form(g, plain, uniform, s), reference),
                              max_abs(derivative_compact_form(g, plain, uniform, s), reference));
    out[kUniformRecovery] = residual_check(r, kProperties[kUniformRecovery].tolerance);
  }

  {
    const Matrix k2 = model.k2(s.t);
    const Matrix k1 = k2.rowwise().sum().asDiagonal();
    if (k2.sum() >= kActiveSensingFloor) {
      const double r = (Vector::Ones(n).transpose() * l_c(k1, k2)).cwiseAbs().maxCoeff();
      out[kLcColumns] = residual_check(r, kProperties[kLcColumns].tolerance);
    }
    out[kWeightRange] = {(k2.array() >= 0.0).all() && (k2.array() <= 1.0).all(), 0.0};
  }

  {
    SensingModel shifted = model;
    for (InputSignal& in : shifted.inputs) in = Constant{evaluate(in, s.t, model.targets) + 10.0 * unit(rng) - 5.0};
    const StateDerivative a = derivative_agent_form(g, gains, model, s);
    const StateDerivative b = derivative_agent_form(g, gains, shifted, s);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!model.weights.is_active(i)) r = std::max(r, std::abs(a.x(i) - b.x(i)));
    }
    out[kPassivity] = residual_check(r, kProperties[kPassivity].tolerance);
  }
  return out;
}

PropertyReport reduce(std::size_t trials, std::uint64_t seed, const std::vector<TrialOutcome>& outcomes) {
  PropertyReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::size_t p = 0; p < kPropertyCount; ++p) {
    PropertyResult r{kProperties[p].name, trials, 0, 0.0, kProperties[p].tolerance};
    for (const TrialOutcome& o : outcomes) {
      if (!o[p].ok) ++r.failures;
      r.worst = std::max(r.worst, o[p].residual);
    }
    report.properties.push_back(r);
  }
  return report;
}

void require_trials(std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("property suite needs at least one trial");
}

}  // namespace

bool PropertyReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& r) { return r.passed(); });
}

const PropertyResult& PropertyReport::operator[](const std::string& name) const {
  for (const PropertyResult& r : properties)
    if (r.name == name) return r;
  throw std::out_of_range("no property named " + name);
}

PropertyReport run_property_suite_serial(std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  std::vector<TrialOutcome> outcomes(trials);
  for (std::size_t k = 0; k < trials; ++k) outcomes[k] = run_trial(seed, k);
  return reduce(trials, seed, outcomes);
}

PropertyReport run_property_suite(std::size_t trials, std::uint64_t seed) {
  require_trials(trials);
  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::exception_ptr> errors(trials);
  const auto count = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    try {
      outcomes[k] = run_trial(seed, static_cast<std::size_t>(k));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return reduce(trials, seed, outcomes);
}

void print_report(std::ostream& out, const PropertyReport& report) {
  out << "property suite: " << report.trials << " trials, seed " << report.seed << '\n';
  for (const PropertyResult& r : report.properties) {
    out << (r.passed() ? "PASS " : "FAIL ") << std::left << std::setw(32) << r.name << std::right
        << " failures=" << r.failures << "/" << r.trials;
    if (r.tolerance > 0.0) {
      out << std::scientific << std::setprecision(2) << " worst=" << r.worst << " tol=" << r.tolerance
          << std::defaultfloat;
    }
    out << '\n';
  }
  out << (report.passed() ? "all properties passed" : "property failures detected") << '\n';
}

std::vector<Trajectory> integrate_batch_serial(std::span<const Scenario> scenarios,
                                               const IntegrateOptions& options) {
  std::vector<Trajectory> out;
  out.reserve(scenarios.size());
  for (const Scenario& sc : scenarios) out.push_back(integrate(sc, options));
  return out;
}

std::vector<Trajectory> integrate_batch(std::span<const Scenario> scenarios,
                                        const IntegrateOptions& options) {
  std::vector<Trajectory> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto count = static_cast<long>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    try {
      out[k] = integrate(scenarios[k], options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace apnet
