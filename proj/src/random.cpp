#include "apnet/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace apnet {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

SensingModel random_sensing_model(std::size_t n, std::mt19937_64& rng, bool constant_signals) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::uniform_int_distribution<std::size_t> pick_m(1, n);
  std::uniform_int_distribution<int> pick_agent(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> kind(0, 2);

  std::vector<Target> targets{Target{CirclePath{{0.0, 0.0}, 1.0, 10.0, unit(rng)}, XCoordinateQuantity{}}};

  auto breakpoints = [&](double lo, double hi) {
    std::uniform_real_distribution<double> v(lo, hi);
    PiecewiseLinear p;
    double t = 0.0;
    for (int k = 0; k < 4; ++k) {
      p.points.push_back({t, v(rng)});
      t += 0.5 + unit(rng);
    }
    return p;
  };

  const std::size_t m = pick_m(rng);
  std::vector<InputSignal> inputs;
  for (std::size_t h = 0; h < m; ++h) {
    const int k = constant_signals ? 0 : kind(rng);
    if (k == 0) inputs.push_back(Constant{value(rng)});
    if (k == 1) inputs.push_back(Sinusoid{unit(rng), 0.5 + unit(rng), unit(rng), value(rng)});
    if (k == 2) inputs.push_back(breakpoints(-2.0, 2.0));
  }

  std::vector<WeightEntry> entries;
  for (std::size_t h = 0; h < m; ++h) {
    const int first = pick_agent(rng);
    std::vector<int> agents{first};
    if (n > 1 && unit(rng) < 0.3) {
      const int second = pick_agent(rng);
      if (second != first) agents.push_back(second);
    }
    for (int a : agents) {
      const int k = constant_signals ? 0 : kind(rng);
      WeightSignal w = Constant{0.2 + 0.8 * unit(rng)};
      if (k == 1) w = breakpoints(0.0, 1.0);
      if (k == 2) w = DistanceBased{0.5 + 2.0 * unit(rng), Point{value(rng), value(rng)}, 0};
      entries.push_back({a, static_cast<int>(h), w});
    }
  }
  return SensingModel{std::move(targets), std::move(inputs), WeightConfig(n, m, std::move(entries))};
}

double closed_loop_spectral_radius(const Matrix& L, const Matrix& k1, const Gains& gains) {
  const Eigen::Index n = L.rows();
  Matrix a(2 * n, 2 * n);
  a.topLeftCorner(n, n) = -gains.alpha * (L + k1);
  a.topRightCorner(n, n) = L;
  a.bottomLeftCorner(n, n) = -gains.gamma * L;
  a.bottomRightCorner(n, n) = -gains.gamma * gains.sigma * Matrix::Identity(n, n);
  Eigen::EigenSolver<Matrix> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Scenario random_constant_scenario(std::size_t max_n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_n(2, std::max<std::size_t>(2, max_n));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = pick_n(rng);
  Graph g = random_connected_graph(n, 0.3, rng);
  SensingModel model = random_sensing_model(n, rng, true);

  const double alpha = 1.0 + 2.0 * unit(rng);
  const Gains gains{alpha, alpha * (2.0 + 3.0 * unit(rng)), 0.0};
  Vector x0(static_cast<Eigen::Index>(n));
  Vector xi0(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    x0(i) = 4.0 * unit(rng) - 2.0;
    xi0(i) = 2.0 * unit(rng) - 1.0;
  }

  const Matrix L = laplacian(g);
  const Matrix k1 = model.k1(0.0);
  const Vector diag = k1.diagonal();
  const Decomposition dec = decompose_k1(std::span<const Vector>(&diag, 1));
  const double lambda_f = f_matrix_min_eig(L, dec.k0);
  const double rho = closed_loop_spectral_radius(L, k1, gains);
  const double dt = std::min(0.05, 0.5 / rho);
  const double duration = 100.0 / lambda_f;
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt));

  return Scenario{
      .name = "random-constant",
      .graph = std::move(g),
      .gains = gains,
      .sensing = std::move(model),
      .x0 = x0,
      .xi0 = xi0,
      .duration = static_cast<double>(steps) * dt,
      .dt = dt,
      .record_stride = std::max<std::size_t>(1, steps / 2000),
  };
}

}  // namespace apnet
