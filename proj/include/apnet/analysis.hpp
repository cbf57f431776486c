#pragma once

#include "apnet/common.hpp"
#include "apnet/graph.hpp"
#include "apnet/network.hpp"

#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace apnet {

/// (1^T K2 c) / (1^T K2 1). Throws NoActiveSensing when the denominator is
/// below kActiveSensingFloor.
double weighted_average(const Matrix& k2, const Vector& c);

/// x - epsilon * 1.
Vector delta(const Vector& x, double epsilon);

/// L_c = K1 1 1^T / (1^T K2 1) - I. Column sums vanish when K1 = diag(K2 1).
Matrix l_c(const Matrix& k1, const Matrix& k2);

/// K_c = L_c K2.
Matrix k_c(const Matrix& k1, const Matrix& k2);

/// e = xi - alpha * L^+ K_c c.
Vector integral_error(const Vector& xi, double alpha, const Matrix& l_pinv, const Matrix& kc,
                      const Vector& c);

struct ErrorCoordinates {
  double epsilon;
  Vector delta;
  Vector e;
};

ErrorCoordinates error_coordinates(const NetworkState& s, const Matrix& k2, const Vector& c,
                                   const Matrix& l_pinv, double alpha);

/// V = |delta|^2 / (2 alpha) + |e|^2 / (2 alpha gamma).
double lyapunov(const Vector& delta, const Vector& e, const Gains& gains);

/// dV/dt along the closed-loop error dynamics:
/// -delta^T (L + K1) delta - (sigma/alpha) |e|^2 + delta^T s1 / alpha + e^T s2 / (alpha gamma).
double lyapunov_rate(const Matrix& L, const Matrix& k1, const Vector& delta, const Vector& e,
                     const Vector& s1, const Vector& s2, const Gains& gains);

// ---- finite differences ----------------------------------------------------

struct Horizon {
  double begin = 0.0;
  double end = std::numeric_limits<double>::infinity();
};

/// Central difference of f at t with step h; second-order one-sided stencil
/// when t +/- h leaves the horizon.
template <class F>
auto finite_difference(F&& f, double t, double h, Horizon horizon) {
  using R = std::decay_t<std::invoke_result_t<F&, double>>;
  if (t - h >= horizon.begin && t + h <= horizon.end) {
    return R((f(t + h) - f(t - h)) / (2.0 * h));
  }
  // Written as differences so that constant signals give exactly zero.
  const R f0 = f(t);
  if (t - h < horizon.begin) {
    return R((4.0 * (f(t + h) - f0) - (f(t + 2.0 * h) - f0)) / (2.0 * h));
  }
  return R((4.0 * (f0 - f(t - h)) - (f0 - f(t - 2.0 * h))) / (2.0 * h));
}

// ---- perturbations -----------------------------------------------------------

struct Perturbations {
  Vector s1;
  Vector s2;
  double eps_dot = 0.0;
  double p1 = 0.0;  // |L^+ K_c c|
  double p2 = 0.0;  // |L^+ dK_c/dt c + L^+ K_c dc/dt|
};

/// s1 = -d(eps)/dt 1 and
/// s2 = -alpha gamma sigma L^+ K_c c - alpha L^+ dK_c/dt c - alpha L^+ K_c dc/dt,
/// with time derivatives from finite differences of step h_fd.
Perturbations perturbations(const SensingModel& model, const Gains& gains, const Matrix& l_pinv,
                            double t, double h_fd, Horizon horizon);

// ---- K1 decomposition --------------------------------------------------------

/// K1(t) = K0 + K~(t) with K0 = diag(0, ..., phi, ..., 0).
struct Decomposition {
  int index = -1;
  double phi = 0.0;
  Vector k0;
  std::vector<Vector> k_tilde;  // diagonals, one per input sample
};

/// Picks the agent whose total weight has the largest positive infimum over
/// the samples (lowest index on ties). Throws DecompositionInfeasible when no
/// agent keeps a positive total weight throughout.
Decomposition decompose_k1(std::span<const Vector> k1_diagonals);

/// Samples diag K1(t) on `times`.
std::vector<Vector> sample_k1(const SensingModel& model, std::span<const double> times);

// ---- ultimate bound -----------------------------------------------------------

struct SignalSuprema {
  double eps_dot = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double s2 = 0.0;
  std::size_t skipped = 0;  // samples without active sensing
};

/// Sampled suprema of |d(eps)/dt|, p1, p2 and |s2| over `times`.
SignalSuprema signal_suprema(const SensingModel& model, const Gains& gains, const Matrix& l_pinv,
                             std::span<const double> times, double h_fd, Horizon horizon);

struct BoundEstimate {
  double eps_dot_star = 0.0;
  double p1_star = 0.0;
  double p2_star = 0.0;
  double lambda_min_f = 0.0;
  double bound = 0.0;
  double s1_star = 0.0;
  double s2_star = 0.0;
};

/// Signal magnitudes at or below this count as zero when sigma = 0.
inline constexpr double kNegligibleSignal = 1e-12;

/// Right-hand side of the ultimate bound on |delta|^2:
/// n^2 eps*^2 / (alpha^2 lambda^2) + (alpha^2/gamma)[p1^2 + 2 p1 p2/(gamma sigma) + p2^2/(gamma sigma)^2].
/// Throws BoundUndefined for sigma = 0 with non-negligible p1 or p2.
double bound_expression(std::size_t n, const Gains& gains, double lambda_min_f, double eps_dot,
                        double p1, double p2);

BoundEstimate ultimate_bound(const Matrix& L, const Gains& gains, const Decomposition& decomposition,
                             const SignalSuprema& suprema);

// ---- special cases --------------------------------------------------------------

enum class SignalRegime { VaryingInputsConstantWeights, ConstantInputsVaryingWeights };

struct ClosedFormSuprema {
  double eps_dot = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double c_star = 0.0;
  double c_dot_star = 0.0;
  double k_star = 0.0;      // sup |K_c(t)|_F
  double k_dot_star = 0.0;  // sup |dK_c/dt|_F
};

/// Closed-form suprema for constant weights (varying inputs) or constant
/// inputs (varying weights). Throws std::invalid_argument when the signal
/// claimed constant varies by more than `constancy_tol` over `times`.
ClosedFormSuprema closed_form_suprema(SignalRegime which, const SensingModel& model,
                                   const Matrix& l_pinv, std::span<const double> times, double h_fd,
                                   Horizon horizon, double constancy_tol = 1e-12);

// ---- empirical settling -----------------------------------------------------------

struct Settling {
  double time = 0.0;       // empirical T
  double sup_after = 0.0;  // sup |delta|^2 over valid samples with t >= T
  double level = 0.0;      // steady envelope: max valid |delta|^2 over the final half
};

/// T is the instant right after the last valid sample whose |delta|^2 exceeds
/// the steady envelope. Samples with valid[k] == 0 are ignored.
Settling empirical_settling(std::span<const double> times, std::span<const double> delta_sq,
                            std::span<const char> valid);

}  // namespace apnet
