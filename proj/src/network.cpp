#include "apnet/network.hpp"

#include <limits>
#include <set>
#include <string>

namespace apnet {

WeightConfig::WeightConfig(std::size_t n, std::size_t m, std::vector<WeightEntry> entries)
    : n_(n), m_(m), entries_(std::move(entries)), by_agent_(n) {
  if (m_ > n_) {
    throw std::invalid_argument("more inputs (" + std::to_string(m_) + ") than agents (" +
                                std::to_string(n_) + ")");
  }
  if (entries_.empty()) throw std::invalid_argument("weight configuration has no entries");
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const WeightEntry& e = entries_[k];
    if (e.agent < 0 || static_cast<std::size_t>(e.agent) >= n_) {
      throw std::invalid_argument("weight entry references unknown agent " + std::to_string(e.agent));
    }
    if (e.input < 0 || static_cast<std::size_t>(e.input) >= m_) {
      throw std::invalid_argument("weight entry references unknown input " + std::to_string(e.input));
    }
    if (!seen.emplace(e.agent, e.input).second) {
      throw std::invalid_argument("duplicate weight entry for agent " + std::to_string(e.agent) +
                                  ", input " + std::to_string(e.input));
    }
    validate(e.signal, std::numeric_limits<std::size_t>::max());
    by_agent_[e.agent].push_back(k);
  }
}

Matrix eval_k2(const WeightConfig& cfg, double t, std::span<const Target> targets) {
  Matrix k2 = Matrix::Zero(cfg.agents(), cfg.agents());
  for (const WeightEntry& e : cfg.entries()) k2(e.agent, e.input) = evaluate(e.signal, t, targets);
  return k2;
}

Matrix eval_k1(const WeightConfig& cfg, double t, std::span<const Target> targets) {
  return eval_k2(cfg, t, targets).rowwise().sum().asDiagonal();
}

void Gains::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
}

Vector SensingModel::inputs_at(double t) const {
  Vector c = Vector::Zero(agents());
  for (std::size_t h = 0; h < inputs.size(); ++h) c(h) = evaluate(inputs[h], t, targets);
  return c;
}

void SensingModel::validate() const {
  if (inputs.size() != weights.inputs()) {
    throw std::invalid_argument("weight configuration expects " + std::to_string(weights.inputs()) +
                                " inputs, scenario has " + std::to_string(inputs.size()));
  }
  for (const InputSignal& s : inputs) apnet::validate(s, targets.size());
  for (const WeightEntry& e : weights.entries()) apnet::validate(e.signal, targets.size());
}

StateDerivative derivative_agent_form(const Graph& g, const Gains& gains, const SensingModel& model,
                                      const NetworkState& s) {
  const std::size_t n = g.size();
  StateDerivative d{Vector::Zero(n), Vector::Zero(n)};
  std::vector<double> c(model.inputs.size());
  for (std::size_t h = 0; h < c.size(); ++h) c[h] = evaluate(model.inputs[h], s.t, model.targets);

  for (std::size_t i = 0; i < n; ++i) {
    double disagreement = 0.0;
    double integral_exchange = 0.0;
    for (int j : g.neighbors(i)) {
      disagreement += s.x(i) - s.x(j);
      integral_exchange += s.xi(i) - s.xi(j);
    }
    double sensing = 0.0;
    for (std::size_t k : model.weights.attachments(i)) {
      const WeightEntry& e = model.weights.entries()[k];
      sensing += evaluate(e.signal, s.t, model.targets) * (s.x(i) - c[e.input]);
    }
    d.x(i) = -gains.alpha * disagreement + integral_exchange - gains.alpha * sensing;
    d.xi(i) = -gains.gamma * (disagreement + gains.sigma * s.xi(i));
  }
  return d;
}

StateDerivative derivative_compact_form(const Matrix& L, const Gains& gains, const Matrix& k1,
                                        const Matrix& k2, const Vector& c, const NetworkState& s) {
  StateDerivative d;
  const Vector lx = L * s.x;
  d.x = -gains.alpha * lx + L * s.xi - gains.alpha * (k1 * s.x) + gains.alpha * (k2 * c);
  d.xi = -gains.gamma * lx - gains.gamma * gains.sigma * s.xi;
  return d;
}

StateDerivative derivative_compact_form(const Graph& g, const Gains& gains,
                                        const SensingModel& model, const NetworkState& s) {
  const Matrix k2 = model.k2(s.t);
  const Matrix k1 = k2.rowwise().sum().asDiagonal();
  return derivative_compact_form(laplacian(g), gains, k1, k2, model.inputs_at(s.t), s);
}

StateDerivative derivative_uniform_form(const Graph& g, double alpha, double gamma,
                                        const WeightConfig& attachments, const Vector& c,
                                        const NetworkState& s) {
  const std::size_t n = g.size();
  StateDerivative d{Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double dx = 0.0;
    double dxi = 0.0;
    for (int j : g.neighbors(i)) {
      dx += -alpha * (s.x(i) - s.x(j)) + (s.xi(i) - s.xi(j));
      dxi += -gamma * (s.x(i) - s.x(j));
    }
    for (std::size_t k : attachments.attachments(i)) {
      dx += -alpha * (s.x(i) - c(attachments.entries()[k].input));
    }
    d.x(i) = dx;
    d.xi(i) = dxi;
  }
  return d;
}

}  // namespace apnet
