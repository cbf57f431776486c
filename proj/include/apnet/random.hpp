#pragma once

#include "apnet/sim.hpp"

#include <cstdint>
#include <random>

namespace apnet {

/// Per-trial generator; identical streams for identical (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Random sensing model on n agents: m in [1, n] inputs, each sensed by one or
/// two agents. Input kinds are constant, sinusoid or piecewise-linear; weight
/// kinds constant, piecewise-linear or distance-based (toward one circling
/// target). With `constant_signals` every input and weight is constant.
SensingModel random_sensing_model(std::size_t n, std::mt19937_64& rng, bool constant_signals = false);

/// Connected graph with n in [2, max_n], constant signals, sigma = 0, random
/// initial conditions. The horizon is 100 / lambda_min(L + K0) and dt keeps
/// dt * rho(A) <= 0.5 for the closed-loop system matrix A.
Scenario random_constant_scenario(std::size_t max_n, std::mt19937_64& rng);

/// Spectral radius of the linear closed-loop matrix [[-a(L+K1), L], [-g L, -g s I]].
double closed_loop_spectral_radius(const Matrix& L, const Matrix& k1, const Gains& gains);

}  // namespace apnet
