#pragma once

#include "apnet/common.hpp"
#include "apnet/graph.hpp"
#include "apnet/signals.hpp"

#include <vector>

namespace apnet {

/// Agent `agent` senses input `input` with value-of-information `signal`.
struct WeightEntry {
  int agent;
  int input;
  WeightSignal signal;
};

/// Time-varying assignment of value-of-information weights to (agent, input)
/// pairs. Agents without entries are passive.
class WeightConfig {
 public:
  /// Validates indices and weight ranges; target references are checked by
  /// SensingModel::validate once the target list is known.
  WeightConfig(std::size_t n, std::size_t m, std::vector<WeightEntry> entries);

  std::size_t agents() const { return n_; }
  std::size_t inputs() const { return m_; }
  const std::vector<WeightEntry>& entries() const { return entries_; }

  /// Indices into entries() belonging to `agent`.
  const std::vector<std::size_t>& attachments(std::size_t agent) const { return by_agent_[agent]; }
  bool is_active(std::size_t agent) const { return !by_agent_[agent].empty(); }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<WeightEntry> entries_;
  std::vector<std::vector<std::size_t>> by_agent_;
};

/// K2(t): entry (i, h) = w_ih(t) for sensed pairs, zero elsewhere; n x n.
Matrix eval_k2(const WeightConfig& cfg, double t, std::span<const Target> targets = {});

/// K1(t) = diag(K2(t) 1).
Matrix eval_k1(const WeightConfig& cfg, double t, std::span<const Target> targets = {});

struct Gains {
  double alpha = 1.0;
  double gamma = 1.0;
  double sigma = 0.0;

  void validate() const;
};

struct NetworkState {
  Vector x;
  Vector xi;
  double t = 0.0;
};

struct StateDerivative {
  Vector x;
  Vector xi;
};

/// Everything exogenous to the agents: targets, sensed inputs c_h(t), and the
/// value-of-information weights w_ih(t).
struct SensingModel {
  std::vector<Target> targets;
  std::vector<InputSignal> inputs;
  WeightConfig weights;

  std::size_t agents() const { return weights.agents(); }

  /// c(t) zero-padded to length n.
  Vector inputs_at(double t) const;
  Matrix k2(double t) const { return eval_k2(weights, t, targets); }
  Matrix k1(double t) const { return eval_k1(weights, t, targets); }

  void validate() const;
};

/// Per-agent evaluation: iterates neighbor lists and input attachments.
StateDerivative derivative_agent_form(const Graph& g, const Gains& gains, const SensingModel& model,
                                      const NetworkState& s);

/// Matrix evaluation with precomputed L, K1(t), K2(t), and padded c(t).
StateDerivative derivative_compact_form(const Matrix& L, const Gains& gains, const Matrix& k1,
                                        const Matrix& k2, const Vector& c, const NetworkState& s);

StateDerivative derivative_compact_form(const Graph& g, const Gains& gains,
                                        const SensingModel& model, const NetworkState& s);

/// The unweighted algorithm without leakage: every attachment counts with
/// weight one and the integral action has no sigma term. Coded independently
/// of the weighted forms.
StateDerivative derivative_uniform_form(const Graph& g, double alpha, double gamma,
                                        const WeightConfig& attachments, const Vector& c,
                                        const NetworkState& s);

}  // namespace apnet
